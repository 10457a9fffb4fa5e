#!/usr/bin/env python3
"""Print exact finite spectra of the gauged operators for several cases.

Each table lists the eigenvalues on the degree-capped polynomial space
(rational values exactly, irrational ones by certified isolating
intervals) together with multiplicities.
"""
import argparse
from fractions import Fraction

from oscchain.model import Case, Params
from oscchain import spectra


def show(title, rep):
    print(f"# {title} (basis size {rep.basis.size}, "
          f"ground energy {rep.ground_energy})")
    for ev in sorted(rep.gauged, key=lambda e: e.approx()):
        if ev.value is not None:
            val = f"{ev.value} (exact)"
        else:
            lo, hi = ev.interval
            val = f"[{float(lo):.12g}, {float(hi):.12g}]"
        print(f"  gauged eigenvalue {val}  multiplicity {ev.multiplicity}")
    print()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=3)
    args = ap.parse_args()
    N = args.N

    show("isotropic three-body, unit masses",
         spectra.spectrum(Case.ISOTROPIC3, Params(), N))
    show("equal masses, distinct springs a=1 b=1 c=2",
         spectra.spectrum(Case.EQUAL_MASS3, Params(c=2), N))
    show("general masses (2, 3, 5/2)",
         spectra.spectrum(Case.GENERAL3,
                          Params(m1=2, m2=3, m3=Fraction(5, 2)), N))
    show("two-body harmonic",
         spectra.spectrum(Case.TWO_BODY_ES, Params(m1=1, m2=1), N))
    show("two-body sextic, level N=2",
         spectra.qes_2body_block(Params(m1=1, m2=1, A=1, N=2)))


if __name__ == "__main__":
    main()
