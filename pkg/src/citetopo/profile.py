"""
Per-network statistic profiles.

A :class:`StatProfile` holds one value per canonical statistic name plus
provenance, and round-trips through JSON and single-row CSV.  Profiles are
the unit exchanged between ``citetopo stats`` and ``citetopo compare``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import __version__
from .clustering import clustering_all, clustering_mixing
from .compare import StatMatrix
from .decomposition import field_bowtie, largest_wcc
from .degree import all_degree_mixing, best_power_law, degree_vector, fit_power_law, mean_degree
from .distance import anf_hop_plot, effective_diameter
from .errors import StatisticsError
from .graph import cycle_diagnostics

SCHEMA_VERSION = 1

STATISTICS = (
    "n", "m", "wcc", "in_field", "core", "out_field",
    "k_mean", "gamma", "gamma_in", "gamma_out",
    "r", "r_in_in", "r_in_out", "r_out_in", "r_out_out",
    "C_mean", "B_mean", "D_mean", "r_C", "r_B", "r_D",
    "diam_eff", "diam_eff_und",
)
SEM_STATISTICS = ("diam_eff", "diam_eff_und")

PRESETS = {
    "paper10": ("in_field", "core", "k_mean", "gamma_in", "gamma_out",
                "r_in_in", "r_out_out", "D_mean", "r_D", "diam_eff_und"),
    "validation10": ("in_field", "core", "out_field", "k_mean", "gamma_out",
                     "r_in_in", "r_out_out", "D_mean", "r_D", "diam_eff"),
    "all21": STATISTICS[2:],
}

PROFILE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "citetopo statistic profile",
    "type": "object",
    "required": ["schema_version", "dataset", "statistics", "sem", "undefined", "provenance"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "dataset": {"type": "string"},
        "statistics": {
            "type": "object",
            "required": list(STATISTICS),
            "properties": {s: {"type": ["number", "null"]} for s in STATISTICS},
            "additionalProperties": False,
        },
        "sem": {
            "type": "object",
            "properties": {s: {"type": ["number", "null"]} for s in SEM_STATISTICS},
            "additionalProperties": False,
        },
        "undefined": {"type": "array", "items": {"enum": list(STATISTICS)}},
        "provenance": {"type": "object"},
        "diagnostics": {"type": "object"},
    },
}


def _round(v):
    """Six significant digits; ``None`` for undefined."""
    if v is None:
        return None
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(f"{v:.6g}")


@dataclass
class StatProfile:
    dataset: str
    statistics: dict
    sem: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.statistics = {s: _round(self.statistics.get(s)) for s in STATISTICS}
        self.sem = {s: _round(self.sem.get(s)) for s in SEM_STATISTICS if s in self.sem}

    @property
    def undefined(self):
        return [s for s in STATISTICS if self.statistics[s] is None]

    def __getitem__(self, name):
        return self.statistics[name]

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "dataset": self.dataset,
            "statistics": dict(self.statistics),
            "sem": dict(self.sem),
            "undefined": self.undefined,
            "provenance": self.provenance,
            "diagnostics": self.diagnostics,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise StatisticsError(f"unsupported profile schema version {d.get('schema_version')!r}")
        missing = [s for s in STATISTICS if s not in d.get("statistics", {})]
        if missing:
            raise StatisticsError(f"profile {d.get('dataset')!r} lacks statistics {missing}")
        return cls(d["dataset"], d["statistics"], d.get("sem", {}),
                   d.get("provenance", {}), d.get("diagnostics", {}))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def csv_header(self):
        return ["dataset", *STATISTICS, *(f"{s}_sem" for s in SEM_STATISTICS)]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.csv_header())
        cells = [self.dataset]
        cells += ["" if self.statistics[s] is None else repr(self.statistics[s]) for s in STATISTICS]
        cells += ["" if self.sem.get(s) is None else repr(self.sem[s]) for s in SEM_STATISTICS]
        w.writerow(cells)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        return profiles_from_csv(text)[0]


def _parse_cell(name, cell):
    if cell == "":
        return None
    return int(cell) if name in ("n", "m") else float(cell)


def profiles_from_csv(text, source="csv"):
    """Parse a table with one profile per row (the single-row profile CSV or the fixtures)."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    out = []
    for row in csv.DictReader(lines):
        st = {s: _parse_cell(s, row.get(s, "")) for s in STATISTICS}
        sem = {s: _parse_cell(s, row.get(f"{s}_sem", "")) for s in SEM_STATISTICS
               if row.get(f"{s}_sem", "") != ""}
        out.append(StatProfile(row["dataset"], st, sem, {"source": source}))
    return out


def paper_profiles():
    """
    Profiles transcribed from the published tables for the six
    bibliographic networks (WoS, CS, Cora, HC, DBLP, arXiv) and the two
    online ones (Gnutella, Twitter), keyed by dataset name.
    """
    text = resources.files("citetopo").joinpath("data/paper_tables.csv").read_text("utf-8")
    return {p.dataset: p for p in profiles_from_csv(text, source="transcribed")}


def matrix_from_profiles(profiles, statistics):
    """
    Stack profiles into a :class:`StatMatrix` over ``statistics``.

    :raises StatisticsError: if any selected statistic is undefined in any profile.
    """
    statistics = list(statistics)
    unknown = [s for s in statistics if s not in STATISTICS]
    if unknown:
        raise StatisticsError(f"unknown statistics {unknown}")
    bad = [(p.dataset, s) for p in profiles for s in statistics if p.statistics[s] is None]
    if bad:
        raise StatisticsError(f"undefined statistics in selection: {bad}")
    values = [[p.statistics[s] for s in statistics] for p in profiles]
    return StatMatrix(np.array(values, dtype=float), [p.dataset for p in profiles], statistics)


def resolve_statistics(preset=None, names=None):
    if names:
        return [s.strip() for s in names if s.strip()]
    preset = preset or "paper10"
    try:
        return list(PRESETS[preset])
    except KeyError:
        raise StatisticsError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}") from None


# --------------------------------------------------------------------------
#  Computing a profile from a graph


def _fit_mode(g, mode, kmin_policy):
    sample = degree_vector(g, mode)
    sample = sample[sample > 0]
    if kmin_policy == "both":
        best, fits = best_power_law(sample)
    else:
        kmin = int(kmin_policy)
        fits = {}
        if (sample >= kmin).any():
            fits[kmin] = fit_power_law(sample, kmin)
        best = fits.get(kmin)
        if best is not None and best.degenerate:
            best = None
    diag = {
        str(k): {"gamma": _round(f.gamma), "tail_n": f.tail_n,
                 "ks_distance": _round(f.ks_distance), "plausible": bool(f.plausible)}
        for k, f in fits.items()
    }
    diag["chosen_kmin"] = best.kmin if best else None
    diag["plausible"] = bool(best.plausible) if best else False
    return (best.gamma if best else None), diag


def compute_profile(g, dataset, seed=0, anf_realizations=100, anf_trials=32,
                    kmin_policy="both"):
    """
    Every statistic of ``g``.  ``anf_realizations=0`` skips the effective
    diameters, which are then reported as undefined.
    """
    if kmin_policy not in ("both", "10", "25", 10, 25):
        raise ValueError(f"unknown kmin policy {kmin_policy!r}")
    kmin_policy = str(kmin_policy)
    st = {"n": g.n, "m": g.m}
    wcc = largest_wcc(g)
    bt = field_bowtie(g, wcc)
    st["wcc"] = 100.0 * wcc.largest_fraction
    fin, fcore, fout = bt.fractions
    st["in_field"], st["core"], st["out_field"] = 100 * fin, 100 * fcore, 100 * fout
    st["k_mean"] = mean_degree(g)

    power = {}
    for key, mode in (("gamma", "k"), ("gamma_in", "in"), ("gamma_out", "out")):
        st[key], power[key] = _fit_mode(g, mode, kmin_policy)

    st.update(all_degree_mixing(g))

    cs = clustering_all(g)
    means = cs.means()
    st["C_mean"], st["B_mean"], st["D_mean"] = means["C"], means["B"], means["D"]
    for v in ("C", "B", "D"):
        st[f"r_{v}"] = clustering_mixing(g, cs, v)

    sem = {}
    if anf_realizations > 0:
        for key, directed in (("diam_eff", True), ("diam_eff_und", False)):
            hp = anf_hop_plot(g, directed, anf_realizations, anf_trials, seed)
            ed = effective_diameter(hp)
            st[key], sem[key] = ed.mean, ed.sem

    provenance = {
        "source": "computed",
        "tool_version": __version__,
        "seed": seed,
        "anf_realizations": anf_realizations,
        "anf_trials": anf_trials,
        "kmin_policy": kmin_policy,
        "kmin": {k: power[k]["chosen_kmin"] for k in power},
    }
    diagnostics = {
        "power_law": power,
        "m_undirected": g.undirected().m,
        "max_degree_undirected": cs.h,
        "cycles": cycle_diagnostics(g),
    }
    return StatProfile(dataset, st, sem, provenance, diagnostics)
