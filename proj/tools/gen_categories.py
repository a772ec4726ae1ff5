#!/usr/bin/env python3
"""Write the bundled category files (data/categories) and test fixtures."""
import cmath
import itertools
import json
import math
import os
import sys


def expi(x):
    return cmath.exp(1j * x)


class Cat:
    def __init__(self, name, labels, dual, fusion, fsyms, rsyms, theta):
        self.name, self.labels, self.dual = name, labels, dual
        self.fusion = fusion      # (a,b) -> list of c (multiplicity free)
        self.fsyms = fsyms        # (a,b,c,d) -> {(e,f): value}, default 1
        self.rsyms = rsyms        # (a,b,c) -> value, default 1
        self.theta = theta

    def N(self, a, b, c):
        return 1 if c in self.fusion(a, b) else 0

    def to_json(self):
        L = self.labels
        out = {"name": self.name, "labels": L,
               "dual": {a: self.dual[a] for a in L}, "N": {}, "F": {}, "R": {},
               "theta": {a: [self.theta[a].real, self.theta[a].imag] for a in L},
               "tolerance": 1e-9}
        for a, b, c in itertools.product(L, repeat=3):
            if self.N(a, b, c):
                out["N"][f"{a},{b},{c}"] = 1
                r = complex(self.rsyms.get((a, b, c), 1))
                out["R"][f"{a},{b},{c}"] = [[[r.real, r.imag]]]
        for a, b, c, d in itertools.product(L, repeat=4):
            left = [e for e in L if self.N(a, b, e) and self.N(e, c, d)]
            right = [f for f in L if self.N(b, c, f) and self.N(a, f, d)]
            if not left:
                continue
            assert len(left) == len(right), (a, b, c, d)
            blk = self.fsyms.get((a, b, c, d), {})
            ent = {}
            for e in left:
                for f in right:
                    v = complex(blk.get((e, f), 1 if len(left) == 1 else 0))
                    ent[f"{e},1,1|{f},1,1"] = [v.real, v.imag]
            out["F"][f"{a},{b},{c},{d}"] = ent
        return out


def fibonacci():
    phi = (1 + math.sqrt(5)) / 2
    def fusion(a, b):
        if a == "1": return [b]
        if b == "1": return [a]
        return ["1", "tau"]
    F = {("tau",) * 4: {("1", "1"): 1 / phi, ("1", "tau"): phi ** -0.5,
                        ("tau", "1"): phi ** -0.5, ("tau", "tau"): -1 / phi}}
    R = {("tau", "tau", "1"): expi(-4 * math.pi / 5), ("tau", "tau", "tau"): expi(3 * math.pi / 5)}
    th = {"1": 1, "tau": expi(4 * math.pi / 5)}
    return Cat("fibonacci", ["1", "tau"], {"1": "1", "tau": "tau"}, fusion, F, R, th)


def ising():
    s2 = 1 / math.sqrt(2)
    def fusion(a, b):
        if a == "1": return [b]
        if b == "1": return [a]
        if a == "psi" and b == "psi": return ["1"]
        if a == "sigma" and b == "sigma": return ["1", "psi"]
        return ["sigma"]
    F = {("sigma",) * 4: {("1", "1"): s2, ("1", "psi"): s2, ("psi", "1"): s2, ("psi", "psi"): -s2},
         ("sigma", "psi", "sigma", "psi"): {("sigma", "sigma"): -1},
         ("psi", "sigma", "psi", "sigma"): {("sigma", "sigma"): -1}}
    R = {("sigma", "sigma", "1"): expi(-math.pi / 8), ("sigma", "sigma", "psi"): expi(3 * math.pi / 8),
         ("sigma", "psi", "sigma"): -1j, ("psi", "sigma", "sigma"): -1j, ("psi", "psi", "1"): -1}
    th = {"1": 1, "sigma": expi(math.pi / 8), "psi": -1}
    return Cat("ising", ["1", "sigma", "psi"], {a: a for a in ["1", "sigma", "psi"]}, fusion, F, R, th)


def cyclic(name, n, fsign, rfun, thfun, labels=None):
    labels = labels or [str(i) for i in range(n)]
    idx = {l: i for i, l in enumerate(labels)}
    def fusion(a, b):
        return [labels[(idx[a] + idx[b]) % n]]
    F = {}
    for a, b, c in itertools.product(labels, repeat=3):
        d = labels[(idx[a] + idx[b] + idx[c]) % n]
        e = labels[(idx[a] + idx[b]) % n]
        f = labels[(idx[b] + idx[c]) % n]
        F[(a, b, c, d)] = {(e, f): fsign(idx[a], idx[b], idx[c])}
    R = {(a, b, labels[(idx[a] + idx[b]) % n]): rfun(idx[a], idx[b])
         for a, b in itertools.product(labels, repeat=2)}
    th = {a: thfun(idx[a]) for a in labels}
    dual = {a: labels[(-idx[a]) % n] for a in labels}
    return Cat(name, labels, dual, fusion, F, R, th)


def trivial():
    return Cat("trivial", ["1"], {"1": "1"}, lambda a, b: ["1"], {}, {}, {"1": 1})


def semion():
    return cyclic("z2", 2, lambda a, b, c: -1 if a == b == c == 1 else 1,
                  lambda a, b: 1j if a == b == 1 else 1, lambda a: 1j if a else 1,
                  labels=["1", "s"])


def z3():
    w = expi(2 * math.pi / 3)
    return cyclic("z3", 3, lambda a, b, c: 1, lambda a, b: w ** (a * b), lambda a: w ** (a * a))


def z2_symmetric():
    return cyclic("z2_symmetric", 2, lambda a, b, c: 1, lambda a, b: 1, lambda a: 1, labels=["1", "g"])


def dump(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=False)
        fh.write("\n")


def main(root):
    cats = os.path.join(root, "data", "categories")
    fix = os.path.join(root, "tests", "fixtures")
    os.makedirs(cats, exist_ok=True)
    os.makedirs(fix, exist_ok=True)
    for c in [trivial(), fibonacci(), ising(), semion(), z3()]:
        dump(c.to_json(), os.path.join(cats, c.name + ".json"))
    dump(z2_symmetric().to_json(), os.path.join(fix, "z2_symmetric.json"))

    bp = fibonacci().to_json()
    bp["name"] = "broken_pentagon"
    key = "tau,tau,tau,tau"
    v = bp["F"][key]["tau,1,1|tau,1,1"]
    bp["F"][key]["tau,1,1|tau,1,1"] = [-v[0], -v[1]]
    dump(bp, os.path.join(fix, "broken_pentagon.json"))

    bh = fibonacci().to_json()
    bh["name"] = "broken_hexagon"
    r = bh["R"]["tau,tau,1"][0][0]
    bh["R"]["tau,tau,1"][0][0] = [r[0], -r[1]]
    dump(bh, os.path.join(fix, "broken_hexagon.json"))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), ".."))
