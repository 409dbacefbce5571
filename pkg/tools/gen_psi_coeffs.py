#!/usr/bin/env python3
"""Regenerate the frozen Taylor coefficients of Psi in hardy_moments.zeta.

Psi(p) = cos(2*pi*(p^2 - p - 1/16))/cos(2*pi*p) is entire (the zeros of the
denominator are cancelled by the numerator) and symmetric about p = 1/2.
Its Taylor coefficients about 1/2 are extracted with a 50-digit Cauchy
integral on a unit circle, sampled at angles offset from the real axis so
the raw quotient form is never evaluated at a removable singularity.
"""

import mpmath as mp

mp.mp.dps = 50

RADIUS = mp.mpf(1)
SAMPLES = 512
ORDERS = 64


def psi(z):
    return mp.cos(2 * mp.pi * (z * z - z - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * z)


def main():
    vals = []
    angles = []
    for j in range(SAMPLES):
        th = 2 * mp.pi * (j + mp.mpf(1) / 2) / SAMPLES
        angles.append(th)
        vals.append(psi(mp.mpf(1) / 2 + RADIUS * mp.e ** (1j * th)))
    coeffs = []
    for k in range(ORDERS):
        acc = mp.mpc(0)
        for th, v in zip(angles, vals):
            acc += v * mp.e ** (-1j * k * th)
        coeffs.append(acc / (SAMPLES * RADIUS ** k))
    # odd orders vanish by symmetry; print the even ones as python literals
    print("_PSI_EVEN = [")
    for k in range(0, ORDERS, 2):
        c = float(mp.re(coeffs[k]))
        print(f"    {c:+.17e},")
    print("]")


if __name__ == "__main__":
    main()
