"""Property battery tying every advertised identity to a measurable check.

Each criterion function returns a CriterionResult holding named checks
(value, tolerance, comparator) plus the raw tables behind them, so the
suite runner can serialize the evidence deterministically. The battery
runs at two scales: "full" is the release gate; "smoke" thins grids and
matrices to a few seconds for determinism and pipeline tests without
changing any code path.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import schrodinger as sch
from .distributions import make_test_function, s_pairing_direct, s_pairing_parseval
from .errors import StabilityHeuristicViolated
from .grids import SampledSignal, TimeGrid
from .signals import acceptance_corpus, band_limited_noise, gaussian_signal
from .transforms import (
    BasisFunction,
    adjoint_defect,
    apply_additive_energy_op,
    apply_multiplicative_energy_op,
    biorth_pairing,
    modulated_reduction_check,
    resolution_roundtrip,
    warped_forward,
    warped_reduction_check,
)
from .warp import WarpSpec, make_analytic_warp

__all__ = [
    "CheckResult",
    "CriterionResult",
    "catalog",
    "smeared_biorth_error",
    "run_battery",
    "criterion_titles",
    "suite_determinism_check",
]

# Error of the smeared delta test cannot fall below the accumulated rounding
# of ~1e5-term quadratures against an O(width) kernel; treat anything under
# this as converged when judging monotone improvement.
SMEAR_FLOOR = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """One named scalar compared against a tolerance."""

    name: str
    value: float
    tolerance: float
    comparator: str = "<"

    @property
    def passed(self) -> bool:
        if self.comparator == "<":
            return self.value < self.tolerance
        if self.comparator == ">":
            return self.value > self.tolerance
        raise ValueError(f"unknown comparator {self.comparator!r}")


@dataclass(frozen=True)
class CriterionResult:
    index: int
    title: str
    checks: Tuple[CheckResult, ...]
    tables: Dict[str, Tuple[Tuple[str, ...], List[tuple]]] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def criterion_titles() -> List[str]:
    return [
        "transform reduction identities",
        "resolution of unity round trips",
        "bi-orthogonality smeared delta",
        "energy operator eigenrelations",
        "self-adjointness dichotomy",
        "distribution pairing cross-checks",
        "closed forms and propagation",
        "cross-orthogonality",
        "non-unitarity witness",
        "suite determinism",
    ]


def catalog() -> List[Tuple[str, WarpSpec]]:
    """The five canonical warps every matrix criterion sweeps.

    chirp's parameters keep g = 1 + 0.1 t positive on every window used
    here (t > -10); exp-rate uses the kappa of the worked examples.
    """
    return [
        ("identity", make_analytic_warp("identity")),
        ("linear-scale", make_analytic_warp("linear-scale", [2.0])),
        ("chirp", make_analytic_warp("chirp", [1.0, 0.05])),
        ("sin-perturbed", make_analytic_warp("sin-perturbed", [0.3, 1.0])),
        ("exp-rate", make_analytic_warp("exp-rate", [0.5])),
    ]


_SCALES: Dict[str, dict] = {
    "full": dict(
        n_t=4096,
        corpus_names=None,  # all ten
        warp_names=None,  # all five
        widths=(80.0, 160.0, 320.0, 640.0),
        eig_ladder=(512, 1024, 2048, 4096),
        pairs_per_warp=3,
        phi_names=("gaussian", "hermite-0", "hermite-1", "hermite-2", "hermite-3"),
        cn_ladder=(251, 501, 1001, 2001, 4001),
        fine_n_t=10001,
        residual_n_t=1001,
        orth_n_t=1001,
        orth_store=100,
    ),
    "smoke": dict(
        n_t=1024,
        corpus_names=("gauss-wide", "hermite-0", "noise-101"),
        warp_names=("identity", "linear-scale", "sin-perturbed"),
        widths=(80.0, 160.0),
        eig_ladder=(512, 1024, 2048),
        pairs_per_warp=1,
        phi_names=("gaussian", "hermite-1"),
        cn_ladder=(251, 501, 1001),
        fine_n_t=2001,
        residual_n_t=501,
        orth_n_t=501,
        orth_store=100,
    ),
}


@dataclass
class _Shared:
    scale: dict
    tgrid: TimeGrid
    warps: List[Tuple[str, WarpSpec]]
    corpus: List[Tuple[str, SampledSignal]]


def _shared(scale_name: str) -> _Shared:
    try:
        scale = _SCALES[scale_name]
    except KeyError:
        raise ValueError(f"unknown scale {scale_name!r}; use 'full' or 'smoke'") from None
    tgrid = TimeGrid(-8.0, 8.0, scale["n_t"])
    warps = catalog()
    if scale["warp_names"] is not None:
        warps = [(n, w) for n, w in warps if n in scale["warp_names"]]
    corpus = acceptance_corpus(tgrid)
    if scale["corpus_names"] is not None:
        corpus = [(n, s) for n, s in corpus if n in scale["corpus_names"]]
    return _Shared(scale, tgrid, warps, corpus)


def _timed(fn):
    def wrapper(shared: _Shared) -> CriterionResult:
        start = time.perf_counter()
        result = fn(shared)
        object.__setattr__(result, "seconds", time.perf_counter() - start)
        return result

    return wrapper


@_timed
def _criterion_1(s: _Shared) -> CriterionResult:
    rows: List[tuple] = []
    mod_max = warp_max = 0.0
    for wname, w in s.warps:
        for sname, sig in s.corpus:
            m = modulated_reduction_check(sig, w)
            r = warped_reduction_check(sig, w)
            mod_max = max(mod_max, m)
            warp_max = max(warp_max, r)
            rows.append((wname, sname, m, r))
    checks = (
        CheckResult("modulated-reduction-max", mod_max, 1e-6),
        CheckResult("warped-reduction-max", warp_max, 1e-6),
    )
    tables = {"reduction-errors": (("warp", "signal", "modulated", "warped"), rows)}
    return CriterionResult(1, criterion_titles()[0], checks, tables)


@_timed
def _criterion_2(s: _Shared) -> CriterionResult:
    rows: List[tuple] = []
    ident_max = other_max = 0.0
    for wname, w in s.warps:
        for sname, sig in s.corpus:
            ra = resolution_roundtrip(sig, w, flavor="additive")
            rm = resolution_roundtrip(sig, w, flavor="multiplicative")
            if wname == "identity":
                ident_max = max(ident_max, ra, rm)
            else:
                other_max = max(other_max, ra, rm)
            rows.append((wname, sname, ra, rm))
    checks = (
        CheckResult("roundtrip-max", other_max, 1e-7),
        CheckResult("roundtrip-identity-max", ident_max, 1e-10),
    )
    tables = {"roundtrip-errors": (("warp", "signal", "additive", "multiplicative"), rows)}
    return CriterionResult(2, criterion_titles()[1], checks, tables)


def smeared_biorth_error(
    warp: WarpSpec,
    width: float,
    sigma: float = 0.085,
    mu: float = 0.4,
    n_t: Optional[int] = None,
) -> float:
    """|smeared pairing - phi(mu)| for a Gaussian phi over an h-window of the given width.

    The E'-quadrature uses composite 16-node Gauss-Legendre panels no wider
    than one kernel oscillation; the t-grid resolves the boundary term of the
    composite rule, which is what limits accuracy for oscillatory integrands.
    """
    phi = make_test_function("gaussian", mu=mu, sigma=sigma)
    lo = float(warp.h_inv(np.array(-0.5 * width)))
    hi = float(warp.h_inv(np.array(0.5 * width)))
    if n_t is None:
        probe = np.linspace(lo, hi, 257)
        g_max = float(np.max(np.asarray(warp.g(probe), dtype=float)))
        n_t = int(math.ceil(width / (0.0055 / g_max)))
    if n_t % 2 == 0:
        n_t += 1
    tgrid = TimeGrid(lo, hi, n_t)

    e_lo, e_hi = mu - 8.0 * sigma, mu + 8.0 * sigma
    panel = min(sigma, 4.0 * math.pi / width)
    n_panels = int(math.ceil((e_hi - e_lo) / panel))
    nodes, weights = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(e_lo, e_hi, n_panels + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    e_primes = (centers[:, None] + half * nodes[None, :]).ravel()
    w_primes = np.broadcast_to(half * weights[None, :], (n_panels, 16)).ravel()

    kernel = biorth_pairing(e_primes, mu, warp, tgrid)
    smeared = complex(np.sum(w_primes * phi(e_primes) * kernel))
    return abs(smeared - complex(phi(np.array(mu))))


@_timed
def _criterion_3(s: _Shared) -> CriterionResult:
    warp = make_analytic_warp("identity")
    widths = s.scale["widths"]
    errors = [smeared_biorth_error(warp, w) for w in widths]
    defect = 0.0
    for prev, cur in zip(errors, errors[1:]):
        if cur >= SMEAR_FLOOR:
            defect = max(defect, cur - max(prev, SMEAR_FLOOR))
    checks = (
        CheckResult("smear-error-width-80", errors[0], 1e-3),
        CheckResult("smear-monotone-defect", max(defect, 0.0), SMEAR_FLOOR),
    )
    tables = {"biorth-smear": (("width", "error"), list(zip(widths, errors)))}
    return CriterionResult(3, criterion_titles()[2], checks, tables)


def _eigen_residual(op: str, warp: WarpSpec, E: float, n: int) -> float:
    tg = TimeGrid(-3.0, 3.0, n)
    flavor = "additive" if op == "additive" else "multiplicative"
    b = BasisFunction(warp, E, flavor).sample(tg)
    if op == "additive":
        out = apply_additive_energy_op(b, warp)
    else:
        out = apply_multiplicative_energy_op(b, warp)
    r = (out.values - E * b.values)[2:-2]
    return float(np.max(np.abs(r)) / np.max(np.abs(b.values[2:-2])))


@_timed
def _criterion_4(s: _Shared) -> CriterionResult:
    ladder = s.scale["eig_ladder"]
    energies = np.arange(-3.0, 3.5, 1.0)
    rows: List[tuple] = []
    slopes: Dict[str, float] = {}
    final_max = 0.0
    for op in ("additive", "multiplicative"):
        worst = []
        for n in ladder:
            r = max(
                _eigen_residual(op, w, float(E), n)
                for _, w in s.warps
                for E in energies
            )
            worst.append(r)
            rows.append((op, n, r))
        slopes[op] = float(
            -np.polyfit(np.log([float(n) for n in ladder]), np.log(worst), 1)[0]
        )
        final_max = max(final_max, worst[-1])
    checks = (
        CheckResult("additive-slope-gap", abs(slopes["additive"] - 4.0), 0.3),
        CheckResult("multiplicative-slope-gap", abs(slopes["multiplicative"] - 4.0), 0.3),
        CheckResult("residual-at-finest", final_max, 1e-6),
    )
    tables = {"eigenrelation-convergence": (("op", "n", "residual"), rows)}
    return CriterionResult(4, criterion_titles()[3], checks, tables)


def _windowed_pair(tgrid: TimeGrid, seed_f: int, seed_k: int) -> Tuple[SampledSignal, SampledSignal]:
    env = np.exp(-(tgrid.times ** 2) / (2.0 * 1.5 ** 2))
    f = band_limited_noise(tgrid, e_max=4.0, seed=seed_f)
    k = band_limited_noise(tgrid, e_max=4.0, seed=seed_k)
    return f.with_values(f.values * env), k.with_values(k.values * env)


@_timed
def _criterion_5(s: _Shared) -> CriterionResult:
    rows: List[tuple] = []
    add_max = 0.0
    npairs = s.scale["pairs_per_warp"]
    for wname, w in s.warps:
        for p in range(npairs):
            f, k = _windowed_pair(s.tgrid, 201 + p, 301 + p)
            d = adjoint_defect("additive", w, f, k)
            add_max = max(add_max, d)
            rows.append((wname, p, d))

    exp_warp = make_analytic_warp("exp-rate", [0.5])
    f, k = _windowed_pair(s.tgrid, 201, 301)
    defect = adjoint_defect("multiplicative", exp_warp, f, k)
    # independent oracle: integration by parts leaves |int conj(f) k (1/g)' dt|
    t = s.tgrid.times
    d_ginv = -0.5 * np.exp(-0.5 * t)
    oracle = abs(complex(np.sum(np.conj(f.values) * k.values * d_ginv) * s.tgrid.dt))
    checks = (
        CheckResult("additive-defect-max", add_max, 1e-8),
        CheckResult("multiplicative-exp-defect", defect, 1e-3, comparator=">"),
        CheckResult("multiplicative-oracle-gap", abs(defect - oracle), 1e-6),
    )
    tables = {
        "adjoint-defects": (("warp", "pair", "additive_defect"), rows),
        "adjoint-dichotomy": (
            ("defect", "oracle"),
            [(defect, oracle)],
        ),
    }
    return CriterionResult(5, criterion_titles()[4], checks, tables)


def _phi_set(names: Sequence[str]):
    out = []
    for name in names:
        if name == "gaussian":
            out.append((name, make_test_function("gaussian", mu=0.0, sigma=1.0)))
        else:
            out.append((name, make_test_function("hermite", n=int(name.split("-")[1]))))
    return out


def _looped_direct(warp: WarpSpec, phi, T0: float = 10.0) -> complex:
    """Double the window until the direct pairing moves by less than 1e-5.

    The start window must already cover the test function's u-support on
    unbounded image sides (the pairing is otherwise rejected outright).
    """
    T = max(T0, 1.25 * phi.u_halfwidth)
    prev = s_pairing_direct(warp, phi, T)
    for _ in range(3):
        cur = s_pairing_direct(warp, phi, 2.0 * T)
        if abs(cur - prev) < 1e-5:
            return cur
        prev, T = cur, 2.0 * T
    return prev


# Finite-image warps never converge under window doubling (the pairing gains
# a fixed increment per doubling); both routes are compared on one matched
# window sized to keep the warp monotone and the rate resolvable.
_MATCHED_T = {"exp-rate": 8.0, "chirp": 9.0}


@_timed
def _criterion_6(s: _Shared) -> CriterionResult:
    rows: List[tuple] = []
    cross_max = 0.0
    for wname, w in s.warps:
        for pname, phi in _phi_set(s.scale["phi_names"]):
            T = _MATCHED_T.get(wname)
            if T is None:
                direct = _looped_direct(w, phi)
                parseval = s_pairing_parseval(w, phi)
            else:
                direct = s_pairing_direct(w, phi, T)
                parseval = s_pairing_parseval(w, phi, T=T)
            diff = abs(direct - parseval)
            cross_max = max(cross_max, diff)
            rows.append(
                (wname, pname, direct.real, direct.imag, parseval.real, parseval.imag, diff)
            )

    gauss = make_test_function("gaussian", mu=0.0, sigma=1.0)
    phi0 = float(gauss(np.array(0.0)))
    ident = s_pairing_direct(make_analytic_warp("identity"), gauss, 40.0)
    linear = make_analytic_warp("linear-scale", [2.0])
    lin_direct = s_pairing_direct(linear, gauss, 40.0)
    lin_parseval = s_pairing_parseval(linear, gauss)
    checks = (
        CheckResult("cross-method-max", cross_max, 1e-4),
        CheckResult("identity-vs-phi0", abs(ident - phi0), 1e-6),
        CheckResult("linear-direct-vs-half-phi0", abs(lin_direct - 0.5 * phi0), 1e-6),
        CheckResult("linear-parseval-vs-half-phi0", abs(lin_parseval - 0.5 * phi0), 1e-6),
    )
    tables = {
        "distribution-pairings": (
            ("warp", "phi", "direct_re", "direct_im", "parseval_re", "parseval_im", "diff"),
            rows,
        )
    }
    return CriterionResult(6, criterion_titles()[5], checks, tables)


_LINEAR2 = make_analytic_warp("linear-scale", [2.0])


def _kind_for(name: str, w: WarpSpec) -> sch.EvolutionKind:
    if name == "additive":
        return sch.additive(w)
    if name == "multiplicative":
        return sch.multiplicative(w)
    return sch.combined(w, _LINEAR2)


def _setups() -> List[Tuple[str, sch.Hamiltonian1D, sch.EigenPair]]:
    out = []
    harm = sch.build_hamiltonian(
        sch.SpaceGrid(-10.0, 10.0, 301), {"kind": "harmonic", "k": 1.0}
    )
    box = sch.build_hamiltonian(sch.SpaceGrid(0.0, math.pi, 121), "box")
    for name, H in (("harmonic", harm), ("box", box)):
        ep = sch.eigensolve(H, 2)[1]
        out.append((name, H, ep))
    return out


def _final_l2_error(
    H: sch.Hamiltonian1D, kind: sch.EvolutionKind, ep: sch.EigenPair, n_t: int
) -> float:
    tg = TimeGrid(0.0, 1.0, n_t)
    closed = sch.separable_solution(ep, kind, TimeGrid(0.0, 1.0, 2))
    psi0 = closed.values[:, 0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StabilityHeuristicViolated)
        field_ = sch.propagate_crank_nicolson(H, kind, psi0, tg, store_every=n_t - 1)
    a = field_.values[:, -1]
    b = closed.values[:, 1]
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


@_timed
def _criterion_7(s: _Shared) -> CriterionResult:
    setups = _setups()
    kinds = ("additive", "multiplicative", "combined")

    res_rows: List[tuple] = []
    res_max = 0.0
    tg_res = TimeGrid(0.0, 1.0, s.scale["residual_n_t"])
    for kname in kinds:
        for pname, H, ep in setups:
            for wname, w in s.warps:
                kind = _kind_for(kname, w)
                field_ = sch.separable_solution(ep, kind, tg_res)
                r = sch.schrodinger_residual(field_, H, kind)
                res_max = max(res_max, r)
                res_rows.append((kname, pname, wname, r))

    slope_cases = [
        ("additive-harmonic-sin", "additive", 0, "sin-perturbed"),
        ("multiplicative-box-exp", "multiplicative", 1, "exp-rate"),
        ("combined-harmonic-chirp", "combined", 0, "chirp"),
    ]
    warp_by_name = dict(catalog())
    cn_rows: List[tuple] = []
    slope_gap_max = 0.0
    ladder = s.scale["cn_ladder"]
    for label, kname, setup_idx, wname in slope_cases:
        if setup_idx >= len(setups):
            continue
        pname, H, ep = setups[setup_idx]
        kind = _kind_for(kname, warp_by_name[wname])
        errs = []
        for n_t in ladder:
            e = _final_l2_error(H, kind, ep, n_t)
            errs.append(e)
            cn_rows.append((label, 1.0 / (n_t - 1), e))
        dts = [1.0 / (n - 1) for n in ladder]
        slope = float(np.polyfit(np.log(dts), np.log(errs), 1)[0])
        slope_gap_max = max(slope_gap_max, abs(slope - 2.0))

    fine_rows: List[tuple] = []
    fine_max = 0.0
    for kname in kinds:
        for pname, H, ep in setups:
            for wname, w in s.warps:
                kind = _kind_for(kname, w)
                e = _final_l2_error(H, kind, ep, s.scale["fine_n_t"])
                fine_max = max(fine_max, e)
                fine_rows.append((kname, pname, wname, e))

    checks = (
        CheckResult("residual-max", res_max, 1e-6),
        CheckResult("cn-slope-gap-max", slope_gap_max, 0.2),
        CheckResult("cn-final-l2-max", fine_max, 1e-4),
    )
    tables = {
        "schrodinger-residuals": (("kind", "potential", "warp", "residual"), res_rows),
        "cn-convergence": (("case", "dt", "final_l2"), cn_rows),
        "cn-final-errors": (("kind", "potential", "warp", "final_l2"), fine_rows),
    }
    return CriterionResult(7, criterion_titles()[6], checks, tables)


@_timed
def _criterion_8(s: _Shared) -> CriterionResult:
    H = sch.build_hamiltonian(
        sch.SpaceGrid(-10.0, 10.0, 301), {"kind": "harmonic", "k": 1.0}
    )
    eps = sch.eigensolve(H, 4)
    warp_by_name = dict(catalog())
    tg50 = TimeGrid(0.0, 1.0, 50)

    sep_rows: List[tuple] = []
    sep_max = 0.0
    for kname, wname in (
        ("additive", "sin-perturbed"),
        ("multiplicative", "exp-rate"),
        ("combined", "chirp"),
    ):
        kind = _kind_for(kname, warp_by_name[wname])
        fields = [sch.separable_solution(ep, kind, tg50) for ep in eps]
        for i in range(4):
            for j in range(i + 1, 4):
                worst = max(
                    sch.cross_orthogonality(fields[i], fields[j], ti)
                    for ti in range(tg50.n)
                )
                sep_max = max(sep_max, worst)
                sep_rows.append((kname, i, j, worst))

    kind = _kind_for("additive", warp_by_name["sin-perturbed"])
    tg = TimeGrid(0.0, 1.0, s.scale["orth_n_t"])
    store = s.scale["orth_store"]
    closed = [sch.separable_solution(ep, kind, TimeGrid(0.0, 1.0, 2)) for ep in eps]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StabilityHeuristicViolated)
        propagated = [
            sch.propagate_crank_nicolson(H, kind, c.values[:, 0], tg, store_every=store)
            for c in closed
        ]
    prop_rows: List[tuple] = []
    prop_max = 0.0
    n_stored = propagated[0].tgrid.n
    for i in range(4):
        for j in range(i + 1, 4):
            worst = max(
                sch.cross_orthogonality(propagated[i], propagated[j], ti)
                for ti in range(n_stored)
            )
            prop_max = max(prop_max, worst)
            prop_rows.append((i, j, worst))

    checks = (
        CheckResult("separable-cross-max", sep_max, 1e-10),
        CheckResult("propagated-cross-max", prop_max, 1e-6),
    )
    tables = {
        "cross-orthogonality-separable": (("kind", "i", "j", "max_over_t"), sep_rows),
        "cross-orthogonality-propagated": (("i", "j", "max_over_t"), prop_rows),
    }
    return CriterionResult(8, criterion_titles()[7], checks, tables)


@_timed
def _criterion_9(s: _Shared) -> CriterionResult:
    f = gaussian_signal(s.tgrid, sigma=1.0, normalize=True)
    exp_warp = make_analytic_warp("exp-rate", [0.5])
    spec = warped_forward(f, exp_warp)
    deviation = abs(spec.l2_norm() - f.l2_norm())
    checks = (CheckResult("norm-deviation", deviation, 1e-3, comparator=">"),)
    tables = {
        "non-unitarity": ((("input_norm", "output_norm", "deviation")), [(f.l2_norm(), spec.l2_norm(), deviation)])
    }
    return CriterionResult(9, criterion_titles()[8], checks, tables)


_CRITERIA = {
    1: _criterion_1,
    2: _criterion_2,
    3: _criterion_3,
    4: _criterion_4,
    5: _criterion_5,
    6: _criterion_6,
    7: _criterion_7,
    8: _criterion_8,
    9: _criterion_9,
}


def run_battery(scale: str = "full", indices: Optional[Sequence[int]] = None) -> List[CriterionResult]:
    """Run criteria 1..9 (determinism, 10, needs the CLI layer; see below)."""
    shared = _shared(scale)
    if indices is None:
        indices = sorted(_CRITERIA)
    return [_CRITERIA[i](shared) for i in indices]


def suite_determinism_check(seed: int = 7) -> CriterionResult:
    """Criterion 10: two smoke-scale suite runs must emit identical CSV bytes.

    Implemented here but executed through the runner layer, imported lazily
    to keep the dependency one-way at import time.
    """
    import hashlib
    import os
    import tempfile

    from .runners import ExperimentConfig, run

    start = time.perf_counter()
    digests = []
    listings = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as out:
            cfg = ExperimentConfig(
                data={"suite": {"scale": "smoke", "determinism": False}, "seed": seed},
                out_dir=out,
                seed=seed,
            )
            run("suite", cfg)
            names = sorted(f for f in os.listdir(out) if f.endswith(".csv"))
            blob = hashlib.sha256()
            for name in names:
                with open(os.path.join(out, name), "rb") as fh:
                    blob.update(name.encode())
                    blob.update(fh.read())
            digests.append(blob.hexdigest())
            listings.append(tuple(names))
    mismatch = 0.0 if (digests[0] == digests[1] and listings[0] == listings[1]) else 1.0
    checks = (CheckResult("csv-byte-mismatch", mismatch, 0.5),)
    tables = {
        "determinism": (
            ("run", "sha256"),
            [(1, digests[0]), (2, digests[1])],
        )
    }
    result = CriterionResult(10, criterion_titles()[9], checks, tables)
    object.__setattr__(result, "seconds", time.perf_counter() - start)
    return result
