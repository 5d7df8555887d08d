"""Reference values frozen into the Rust tests.

Computed with mpmath at 40 significant digits, independently of the crate.
Run: python3 reference_values.py
"""
from mpmath import mp, mpf, fresnelc, fresnels, quad, cos, sin, pi, sqrt, expj, fabs

mp.dps = 40

print("# Fresnel integrals C(x), S(x)")
for x in ["1e-6", "0.5", "1", "1.5", "2", "3", "4.5", "10", "100.3", "1000.7"]:
    v = mpf(x)
    print(f"{x:>8}  C={mp.nstr(fresnelc(v), 20)}  S={mp.nstr(fresnels(v), 20)}")


def sub_integral(lo, hi, phase):
    re = quad(lambda t: cos(phase(t)), [lo, (lo + hi) / 2, hi], maxdegree=12)
    im = quad(lambda t: sin(phase(t)), [lo, (lo + hi) / 2, hi], maxdegree=12)
    return re + 1j * im


def fresnel_gain(n, delta, spacing, lam, focus, z, xt=mpf(0)):
    """Quadratic-phase matched-filter gain over continuous sub-array apertures."""
    n = mpf(n)
    half_offset = (delta + (n - 1) * spacing) / 2 if delta is not None else mpf(0)
    centers = [-half_offset, half_offset] if delta is not None else [mpf(0)]
    k = pi / lam

    def px(x):
        return k * (x * x / focus - (x - xt) ** 2 / z)

    def py(y):
        return k * y * y * (1 / focus - 1 / z)

    total = 0
    for c in centers:
        lo, hi = c - n * spacing / 2, c + n * spacing / 2
        pieces = 64
        step = (hi - lo) / pieces
        for i in range(pieces):
            total += sub_integral(lo + i * step, lo + (i + 1) * step, px)
    yfac = sub_integral(-spacing / 2, spacing / 2, py)
    area = len(centers) * n * spacing * spacing
    return fabs(total * yfac) ** 2 / area ** 2


print("# Quadratic-phase gains")
lam = mpf("0.02")
d = lam / 2
print("ULA N=50 F=30 z=60", mp.nstr(fresnel_gain(50, None, d, lam, 30, 60), 16))
print("ULA N=50 F=30 z=20", mp.nstr(fresnel_gain(50, None, d, lam, 30, 20), 16))
print("ULA N=200 F=30 z=60", mp.nstr(fresnel_gain(200, None, d, lam, 30, 60), 16))
print("MLA N=64 D=0.72 F=30 z=20", mp.nstr(fresnel_gain(64, mpf("0.72"), d, lam, 30, 20), 16))
print("MLA N=16 D=1 F=30 z=45", mp.nstr(fresnel_gain(16, mpf(1), d, lam, 30, 45), 16))
print("MLA N=16 D=1 F=30 z=30 xt=0.1", mp.nstr(fresnel_gain(16, mpf(1), d, lam, 30, 30, mpf("0.1")), 16))
print("ULA N=40 spacing=0.013 lam=0.02 F=12 z=30", mp.nstr(fresnel_gain(40, None, mpf("0.013"), lam, 12, 30), 16))
