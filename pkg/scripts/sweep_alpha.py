"""Sweep the Coxeter angle pi/p: parameter enclosure, cone angle, meridian
rotation and face-poset type at a rational point inside each enclosure."""

import argparse
import csv
import sys

from dehnfill import family, reflect, vinberg
from dehnfill.exactnum import display


def row(p: int) -> dict:
    pt = family.solve_t_for_p(p)
    t = pt.t if pt.exact else pt.representative()
    A = family.cartan_at(t)
    P = vinberg.face_poset(A, 4)
    iso = vinberg.poset_isomorphic(P, vinberg.reference_poset("bitruncated"))[0]
    m = reflect.meridian_holonomy(reflect.realize(A), 0, 1)
    ang = family.angle_dictionary(p=p)
    return {
        "p": p,
        "t": display(t),
        "exact": pt.exact,
        "alpha/pi": str(ang.alpha_over_pi),
        "theta/pi": str(ang.theta_over_pi),
        "m": ang.m if ang.m is not None else "",
        "cos_6alpha": display(m.cos6alpha),
        "meridian_identity": m.is_identity,
        "bitruncated": iso,
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pmax", type=int, default=12)
    args = ap.parse_args()
    rows = [row(p) for p in range(3, args.pmax + 1)]
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
