#!/usr/bin/env python3
"""Generate the shipped demo dataset (data/demo_lifestyle.csv).

86 synthetic country records with three variable groups:

* demographic -- six predictors on realistic scales. Five carry signal
  through a shared development factor; water_access is pure noise, so the
  penalized fit should drop it at the cross-validated lambda.
* health -- two strongly negatively correlated responses built from the
  same latent signal with opposite signs.
* food -- three filler columns that exercise the prep command only.

The CSV is checked in; rerun this script only to regenerate it.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

SEED = 20260314
N = 86
NOISE_SD = 0.33  # response noise relative to unit-variance signal


def zscore(v: np.ndarray) -> np.ndarray:
    return (v - v.mean()) / v.std(ddof=1)


def main() -> None:
    rng = np.random.default_rng(SEED)

    # latent development level ties the signal predictors together
    dev = rng.normal(size=N)
    fertility_z = zscore(-0.80 * dev + 0.55 * rng.normal(size=N))
    gni_z = zscore(0.85 * dev + 0.50 * rng.normal(size=N))
    growth_z = zscore(-0.55 * dev + 0.80 * rng.normal(size=N))
    urban_z = zscore(0.70 * dev + 0.65 * rng.normal(size=N))
    sanitation_z = zscore(0.80 * dev + 0.55 * rng.normal(size=N))
    water_z = zscore(rng.normal(size=N))  # pure noise

    signal = zscore(
        0.45 * fertility_z
        - 0.10 * gni_z
        + 0.08 * growth_z
        - 0.15 * urban_z
        - 0.40 * sanitation_z
    )
    yll_comm_z = signal + NOISE_SD * rng.normal(size=N)
    yll_noncomm_z = -signal + NOISE_SD * rng.normal(size=N)

    # affine maps onto plausible raw scales (z-scoring undoes these exactly)
    columns = {
        "fertility_rate": 3.1 + 1.5 * fertility_z,
        "gni_per_capita": 14500.0 + 11800.0 * gni_z,
        "population_growth": 1.4 + 1.1 * growth_z,
        "urban_population": 54.0 + 21.0 * urban_z,
        "water_access": 82.0 + 14.0 * water_z,
        "sanitation_access": 68.0 + 24.0 * sanitation_z,
        "yll_communicable": 21.0 + 11.0 * yll_comm_z,
        "yll_noncommunicable": 63.0 + 9.0 * yll_noncomm_z,
        "kcal_total": 2650.0 + 420.0 * zscore(0.6 * dev + 0.8 * rng.normal(size=N)),
        "meat_kcal": 310.0 + 170.0 * zscore(0.7 * dev + 0.7 * rng.normal(size=N)),
        "vegetable_kcal": 190.0 + 60.0 * zscore(rng.normal(size=N)),
    }

    out = Path(__file__).resolve().parent.parent / "data" / "demo_lifestyle.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    with open(out, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(names) + "\n")
        for i in range(N):
            handle.write(",".join(f"{columns[c][i]:.6f}" for c in names) + "\n")
    print(f"wrote {out} ({N} rows, {len(names)} columns)")
    print("cor(yll_comm, yll_noncomm) =", np.corrcoef(yll_comm_z, yll_noncomm_z)[0, 1])


if __name__ == "__main__":
    main()
