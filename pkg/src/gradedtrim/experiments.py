"""Seeded sweeps and random experiments over the families and generic forms."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .altpf import AltMatrix, family, sub_pfaffians
from .ideal import (GradedIdeal, NotArtinianError, ann, hilbert, is_compressed,
                    min_gens, same_ideal, trim)
from .koszul import (betti, even_socle_gorenstein_table, generic_table,
                     initial_degree, tor_dim_via_theta)
from .linalg import DEFAULT_PRIME
from .poly import DualForm, Poly, random_form
from .toralg import invariants


@dataclass
class ExperimentReport:
    name: str
    config: dict
    rows: list = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "config": self.config, "rows": self.rows,
                "aggregate": self.aggregate, "failures": self.failures}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def to_csv(self) -> str:
        keys = sorted({k for r in self.rows for k in r})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in self.rows:
            w.writerow([_cell(r.get(k)) for k in keys])
        return buf.getvalue()

    def text(self) -> str:
        lines = [f"{self.name} {json.dumps(self.config, sort_keys=True)}"]
        for r in self.rows:
            lines.append("  " + ", ".join(f"{k}={_cell(v)}" for k, v in sorted(r.items())))
        lines.append("aggregate: " + json.dumps(self.aggregate, sort_keys=True))
        lines.append("PASS" if self.passed else f"FAIL ({len(self.failures)} failures)")
        return "\n".join(lines)


def _cell(v):
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


def trial_rng(*key: int) -> np.random.Generator:
    """Counter-based generator for one trial, independent of trial order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


def _table_rows(tb) -> dict:
    return {str(r): v for r, v in tb.rows().items()}


# -- generic forms -------------------------------------------------------------

def generic_betti(s: int, trials: int, seed: int, p: int = DEFAULT_PRIME) -> ExperimentReport:
    """Betti tables of ann(phi) for random phi of degree 2s-1."""
    if s < 2:
        raise ValueError("need s >= 2")
    expected = generic_table(s)
    rep = ExperimentReport("generic_betti", {"s": s, "trials": trials, "seed": seed, "p": p})
    matches = 0
    for k in range(trials):
        phi = random_form(2 * s - 1, trial_rng(seed, k), p, DualForm)
        table = betti(ann(phi))
        ok = table == expected
        matches += ok
        row = {"trial": k, "match": ok, "betti": _table_rows(table)}
        rep.rows.append(row)
        if not ok:
            rep.failures.append({"trial": k, "seed": [seed, k]})
    rep.aggregate = {"matches": matches, "trials": trials, "expected_b": s % 2}
    return rep


def theta_crosscheck(degrees, trials: int, seed: int, p: int = DEFAULT_PRIME,
                     monomials: bool = True) -> ExperimentReport:
    """Compare the Theta-rank formula with Koszul Betti numbers of ann(phi)."""
    rep = ExperimentReport("theta_crosscheck", {"degrees": list(degrees), "trials": trials,
                                                "seed": seed, "p": p})
    agree = total = 0

    def run(phi, label):
        ideal = ann(phi)
        table = betti(ideal)
        t = initial_degree(phi)
        row = {"form": label, "degree": phi.degree, "t": t}
        ok = True
        for i in (2, 3):
            lhs, rhs = tor_dim_via_theta(phi, i, t), table[i, i + t - 1]
            row[f"theta_{i}"], row[f"betti_{i}"] = lhs, rhs
            ok &= lhs == rhs
        return ideal, row, ok

    for c in degrees:
        for k in range(trials):
            phi = random_form(c, trial_rng(seed, c, k), p, DualForm)
            _, row, ok = run(phi, f"random[{c},{k}]")
            row["match"] = ok
            rep.rows.append(row)
            agree += ok
            total += 1
            if not ok:
                rep.failures.append({"degree": c, "trial": k, "seed": [seed, c, k]})
        if monomials:
            for mono in _stress_monomials(c):
                phi = DualForm({mono: 1}, p)
                ideal, row, ok = run(phi, str(phi))
                ci = GradedIdeal([Poly.monomial(tuple(mono[u] + 1 if v == u else 0
                                                      for v in range(3)), p=p)
                                  for u in range(3)], p)
                ok &= same_ideal(ideal, ci, c + 2)
                row["match"] = ok
                rep.rows.append(row)
                agree += ok
                total += 1
                if not ok:
                    rep.failures.append({"degree": c, "form": str(phi)})
    rep.aggregate = {"agree": agree, "total": total}
    return rep


def _stress_monomials(c: int) -> list:
    a = c // 3
    balanced = (c - 2 * a, a, a)
    return sorted({(c, 0, 0), balanced}, reverse=True)


# -- explicit constructions ----------------------------------------------------

@dataclass
class Construction:
    r: int
    kind: str
    m: int
    j: int | None
    index: int

    def describe(self) -> str:
        name = self.kind if self.j is None else f"{self.kind}(j={self.j})"
        return f"trim(Pf({name}, m={self.m}), {self.index})"

    def matrix(self, p: int = DEFAULT_PRIME) -> AltMatrix:
        return family(self.kind, self.m, self.j, p)

    def ideal(self, p: int = DEFAULT_PRIME) -> GradedIdeal:
        return trim(GradedIdeal(sub_pfaffians(self.matrix(p)).pf, p), self.index)


def realizing_construction(s: int, r: int) -> Construction:
    """The trimmed Pfaffian ideal used to realize class G(r) with socle degrees s, 2s-1."""
    if not s <= r <= 2 * s - 1:
        raise ValueError(f"need {s} <= r <= {2 * s - 1}")
    if r == 2 * s - 1:
        return Construction(r, "Vj", s, s, s + 1)
    if r == s and s % 2 == 0:
        return Construction(r, "Hev", s, None, 1)
    if r % 2 == 0:
        return Construction(r, "Vj", r // 2, r - s, r // 2 + 1)
    # odd r: the trimmed row is x^2 e_s + z^2 e_{s+1} + y e_{s+2}, at index j + 1
    j = r + 1 - s
    return Construction(r, "Vj", (r + 1) // 2, j, j + 1)


def certify(ideal: GradedIdeal, socle: dict, dmax: int | None = None) -> dict:
    data = hilbert(ideal, dmax)
    inv = invariants(ideal, dmax)
    return {
        "mu": min_gens(ideal).mu,
        "socle": {str(d): c for d, c in data.socle_degrees().items()},
        "socle_ok": data.socle_degrees() == socle,
        "compressed": is_compressed(ideal, dmax=dmax),
        "class": inv.class_label,
        "invariants": inv.to_dict(),
    }


def realizability_sweep(s: int, p: int = DEFAULT_PRIME) -> ExperimentReport:
    if s < 3:
        raise ValueError("need s >= 3")
    rep = ExperimentReport("realizability_sweep", {"s": s, "p": p})
    socle = {s: 1, 2 * s - 1: 1}
    for r in range(s, 2 * s):
        con = realizing_construction(s, r)
        cert = certify(con.ideal(p), socle, 3 * s + 3)
        ok = (cert["socle_ok"] and cert["compressed"] and cert["class"] == f"G({r})")
        row = {"r": r, "construction": con.describe(), **cert,
               "class_is_mu_minus_3": cert["class"] == f"G({cert['mu'] - 3})", "pass": ok}
        rep.rows.append(row)
        if not ok:
            rep.failures.append({"r": r, "construction": con.describe()})
    rep.aggregate = {"certified": sum(r["pass"] for r in rep.rows), "targets": s}
    return rep


# -- even socle degree ---------------------------------------------------------

def random_linear_alt(n: int, rng: np.random.Generator, p: int = DEFAULT_PRIME) -> AltMatrix:
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            upper[(i, j)] = random_form(1, rng, p)
    return AltMatrix(n, {k: v for k, v in upper.items() if v}, p)


def even_socle_study(s: int, trials: int, seed: int, p: int = DEFAULT_PRIME) -> ExperimentReport:
    """Trim the last Pfaffian of random linear (2s+1)-matrices with socle degree 2s-2."""
    if s < 3:
        raise ValueError("need s >= 3")
    rep = ExperimentReport("even_socle_study", {"s": s, "trials": trials, "seed": seed, "p": p})
    n = 2 * s + 1
    expected = even_socle_gorenstein_table(s)
    tally: dict = {}
    kept = 0
    dmax = 3 * s + 3
    for k in range(trials):
        mat = random_linear_alt(n, trial_rng(seed, k), p)
        row: dict = {"trial": k}
        try:
            K = GradedIdeal(sub_pfaffians(mat).pf, p)
            hk = hilbert(K, dmax)
        except (NotArtinianError, ValueError):
            hk = None
        if hk is None or not hk.is_artinian or hk.socle_degrees() != {2 * s - 2: 1} \
                or betti(K, dmax) != expected:
            row["kept"] = False
            rep.rows.append(row)
            continue
        kept += 1
        ideal = trim(K, n)
        cert = certify(ideal, {s: 1, 2 * s - 2: 1}, dmax)
        r = cert["invariants"]["r"]
        ok = (cert["mu"] in (2 * s, 2 * s + 1) and cert["socle_ok"] and cert["compressed"]
              and cert["class"] == f"G({r})" and 2 * s - 3 <= r <= 2 * s - 1)
        row.update({"kept": True, "beta_1_s": betti(K, dmax)[1, s], **cert, "pass": ok})
        rep.rows.append(row)
        key = f"mu={cert['mu']},{cert['class']}"
        tally[key] = tally.get(key, 0) + 1
        if not ok:
            rep.failures.append({"trial": k, "seed": [seed, k]})
    rep.aggregate = {"kept": kept, "trials": trials, "pairs": dict(sorted(tally.items()))}
    return rep


__all__ = ["ExperimentReport", "generic_betti", "theta_crosscheck", "realizability_sweep",
           "realizing_construction", "even_socle_study", "certify", "trial_rng",
           "random_linear_alt"]
