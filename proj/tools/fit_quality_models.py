#!/usr/bin/env python3
"""Fit the synthetic quality-model constants and write data/quality_models.json.

Model (mirrors src/semantic_env.cpp):
    Qbar(snr, eps) = q_floor + (q_ceil(eps) - q_floor) * S(snr)
    S(snr)         = 1 / (1 + exp(-snr_slope * (snr - snr_mid)))
    q_ceil(eps)    = q_hi - (q_hi - q_lo) * (exp(-k x) - exp(-k)) / (1 - exp(-k)),  x in [0, 1]

Targets per dataset:
  * low-CR SNR anchors at 0, 18 and 30 dB,
  * max-CR high-SNR plateau (q_ceil_max_cr, within 0.45 dB),
  * max-CR quality at 0 dB,
  * CR-gain shape at 30 dB: Qbar(1/6) - Qbar(1/30) in [4, 10], Qbar(3/10) - Qbar(1/6) < 1.

Usage: python3 tools/fit_quality_models.py [--out data/quality_models.json]
"""

import argparse
import json
import math
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

CR_MIN = 1.0 / 30.0
CR_MAX = 3.0 / 10.0
CR_MID = 1.0 / 6.0
GAIN_HI_TARGET = 0.8
CONTENT_NOISE_STD = 0.6
ORACLE_ERROR_BOUND = 1.0

# low-CR anchors (dB at SNR 0, 18, 30), max-CR plateau and max-CR quality at 0 dB.
TARGETS = {
    "bdd100k-like": {"low_cr": (23.89, 28.65, 28.93), "q_ceil_max_cr": 40.34, "max_cr_0db": 33.0},
    "mtdt-like": {"low_cr": (27.60, 29.80, 30.00), "q_ceil_max_cr": 36.69, "max_cr_0db": 34.5},
    "ubs-like": {"low_cr": (25.50, 28.10, 28.30), "q_ceil_max_cr": 35.78, "max_cr_0db": 32.5},
    "ubm-like": {"low_cr": (24.00, 26.20, 26.40), "q_ceil_max_cr": 33.69, "max_cr_0db": 30.5},
}
ANCHOR_SNRS = (0.0, 18.0, 30.0)
# q_floor, q_ceil_min_cr - q_floor, snr_mid, log snr_slope, log cr_sat, q_ceil_max_cr
BOUNDS = [(0.0, 25.0), (0.5, 40.0), (-30.0, 15.0), (math.log(0.05), math.log(1.0)),
          (math.log(1.0), math.log(20.0)), (20.0, 50.0)]


def saturation(snr, mid, slope):
    return 1.0 / (1.0 + math.exp(-slope * (snr - mid)))


def q_ceil(eps, q_lo, q_hi, k):
    x = (eps - CR_MIN) / (CR_MAX - CR_MIN)
    tail = math.exp(-k)
    return q_hi - (q_hi - q_lo) * (math.exp(-k * x) - tail) / (1.0 - tail)


def mean_quality(snr, eps, p):
    ceiling = q_ceil(eps, p["q_ceil_min_cr"], p["q_ceil_max_cr"], p["cr_sat"])
    return p["q_floor"] + (ceiling - p["q_floor"]) * saturation(snr, p["snr_mid"], p["snr_slope"])


def unpack(z):
    q_floor, gap_lo, snr_mid, log_slope, log_k, q_hi = z
    return {
        "q_floor": q_floor,
        "q_ceil_min_cr": q_floor + abs(gap_lo),
        "q_ceil_max_cr": q_hi,
        "snr_mid": snr_mid,
        "snr_slope": math.exp(log_slope),
        "cr_sat": math.exp(log_k),
    }


def hinge(value, lo, hi):
    return max(0.0, lo - value) ** 2 + max(0.0, value - hi) ** 2


def loss(z, target):
    p = unpack(z)
    anchors = [mean_quality(s, CR_MIN, p) for s in ANCHOR_SNRS]
    gain_lo = mean_quality(30.0, CR_MID, p) - anchors[2]
    gain_hi = mean_quality(30.0, CR_MAX, p) - mean_quality(30.0, CR_MID, p)
    err = sum((q - a) ** 2 for q, a in zip(anchors, target["low_cr"]))
    err += (p["q_ceil_max_cr"] - target["q_ceil_max_cr"]) ** 2
    err += (gain_hi - GAIN_HI_TARGET) ** 2
    err += (mean_quality(0.0, CR_MAX, p) - target["max_cr_0db"]) ** 2
    # Hard windows: the 18 -> 30 dB plateau rise and the CR gains.
    err += 1e3 * hinge(anchors[2] - anchors[1], 0.0, 0.45)
    err += 1e3 * hinge(gain_lo, 4.1, 9.9) + 1e3 * hinge(gain_hi, 0.0, 0.95)
    err += 1e-4 * (p["cr_sat"] - 5.0) ** 2
    if p["q_ceil_min_cr"] > p["q_ceil_max_cr"]:
        err += 1e3
    return err


def fit(target):
    best = None
    for q_floor in np.linspace(0.0, 22.0, 12):
        for mid in (-10.0, -5.0, 0.0, 5.0):
            z0 = np.array([q_floor, max(1.0, target["low_cr"][2] - q_floor), mid, math.log(0.2),
                           math.log(5.0), target["q_ceil_max_cr"]])
            res = minimize(loss, z0, args=(target,), method="Nelder-Mead",
                           bounds=BOUNDS, options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 40000, "maxfev": 40000})
            if best is None or res.fun < best.fun:
                best = res
    return unpack(best.x), best.fun


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "quality_models.json"))
    args = parser.parse_args()

    models = {}
    for tag, target in TARGETS.items():
        params, residual = fit(target)
        params.update({
            "content_noise_std": CONTENT_NOISE_STD,
            "oracle_error_bound": ORACLE_ERROR_BOUND,
            "cr_min": CR_MIN,
            "cr_max": CR_MAX,
        })
        models[tag] = {k: (round(v, 6) if k not in ("cr_min", "cr_max") else v) for k, v in params.items()}
        p = models[tag]
        print(f"{tag}: residual={residual:.3e} "
              + " ".join(f"Q({s:g},1/30)={mean_quality(s, CR_MIN, p):.2f}" for s in ANCHOR_SNRS)
              + f" gain_lo={mean_quality(30, CR_MID, p) - mean_quality(30, CR_MIN, p):.2f}"
              + f" gain_hi={mean_quality(30, CR_MAX, p) - mean_quality(30, CR_MID, p):.2f}"
              + f" Q(0,3/10)={mean_quality(0, CR_MAX, p):.2f}")

    doc = {"schema_version": 1, "generator": "tools/fit_quality_models.py", "models": models}
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
