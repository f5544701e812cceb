"""Catalog of optimization methods, consensus estimators and distributed
algorithms, each built with concrete (exact) parameters."""

from __future__ import annotations

from dataclasses import dataclass

from .certify import check_consensus_estimator, check_distributed_algorithm, check_optimization_method
from .errors import CatalogError
from .ratpoly import RationalFunction, exact, z
from .synthesis import cascade, compose
from .tfmatrix import PartitionedTransferMatrix

OPT, EST, ALG = "opt-method", "estimator", "algorithm"

DEFAULTS = {"alpha": exact("0.1"), "beta": exact("0.5")}
SVL_BETA = exact("0.4")
ACCEL_GAMMA = exact("0.25")

_ALIASES = {"α": "alpha", "β": "beta", "γ": "gamma", "a": "alpha", "b": "beta", "g": "gamma"}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    params: dict
    build: object
    provenance: str
    order: int | None = None
    factors: tuple | None = None  # (g_opt, g_con1, g_con2) or (g_opt, g_con)

    def certify(self, **kw):
        if self.kind == OPT:
            return check_optimization_method(self.build, subject=self.name, **_only(kw, "eps_grid"))
        if self.kind == EST:
            return check_consensus_estimator(self.build, self.order, subject=self.name,
                                             **_only(kw, "radius", "generic_lambdas", "profile", "lambdas", "strict"))
        return check_distributed_algorithm(self.build, subject=self.name, **kw)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "kind": self.kind,
            "params": {k: str(v) for k, v in self.params.items()},
            "provenance": self.provenance,
        }
        if self.order is not None:
            out["order"] = self.order
        out["transfer"] = self.build.to_json()
        if self.factors:
            out["factors"] = [f.to_json() for f in self.factors]
        return out


def _only(kw: dict, *keys) -> dict:
    return {k: v for k, v in kw.items() if k in keys}


# -- builders ----------------------------------------------------------------

def gradient_descent(alpha) -> RationalFunction:
    return -alpha / (z - 1)


def proximal_point(alpha) -> RationalFunction:
    return -alpha * z / (z - 1)


def accelerated(alpha, beta, gamma) -> RationalFunction:
    return -alpha * ((1 + gamma) * z - gamma) / ((z - 1) * (z - beta))


def _estimator(g11, g12, g21, g22, label) -> PartitionedTransferMatrix:
    return PartitionedTransferMatrix(((g11, g12), (g21, g22)), label=label, symbol="G")


def eq2_estimator() -> PartitionedTransferMatrix:
    """First-order estimator ``x+ = x + L(w - x)``, ``y = w - x``."""
    e = -1 / (z - 1)
    return _estimator(1, e, 1, e, "eq2_estimator")


def eq2z_estimator() -> PartitionedTransferMatrix:
    """Adapt-then-combine variant of :func:`eq2_estimator`."""
    return _estimator(1, -z / (z - 1), 1, -1 / (z - 1), "eq2z_estimator")


def diging_matrix(alpha) -> PartitionedTransferMatrix:
    """DIGing with network variables ``(x^{t-1}, y^{t-1})``."""
    d = z - 1
    rows = (
        (-alpha / d, -z / d, alpha * z / d ** 2),
        (-alpha / (z * d), -1 / d, alpha / d ** 2),
        (1 / z, 0, -1 / d),
    )
    return PartitionedTransferMatrix(rows, label="diging", symbol="H")


def table_estimator(name: str, beta=None) -> PartitionedTransferMatrix:
    d2 = (z - 1) ** 2
    half = exact("1/2")
    if name == "exact_diffusion":
        g12, g22 = -half * z ** 2 / d2, (half - z) / d2
    elif name == "nids":
        g12, g22 = -half * z ** 2 / d2, (-half + z - z ** 2) / d2
    elif name == "extra":
        g12 = g22 = (half - z) / d2
    elif name == "svl":
        g12, g22 = -z * (z + beta - 1) / d2, (1 - (1 + beta) * z) / d2
    else:
        raise CatalogError(f"no tabulated estimator {name!r}")
    return _estimator(1, g12, 1, g22, f"{name}_estimator")


def accelerated_factor(g_opt: RationalFunction, alpha) -> PartitionedTransferMatrix:
    e = g_opt / alpha
    return _estimator(1, e, 1, e, "accelerated_factor")


# -- parameter handling ------------------------------------------------------

def _params(name: str, allowed: tuple, given: dict, defaults: dict) -> dict:
    out = {}
    for k, v in given.items():
        key = _ALIASES.get(k, k)
        if key not in allowed:
            raise CatalogError(f"{name} takes no parameter {k!r} (allowed: {', '.join(allowed) or 'none'})")
        try:
            out[key] = exact(v)
        except (TypeError, ValueError) as exc:
            raise CatalogError(f"parameter {k}={v!r} is not a number") from exc
    for k in allowed:
        out.setdefault(k, defaults[k])
    for k, v in out.items():
        if complex(v).imag != 0:
            raise CatalogError(f"parameter {k} must be real")
    if "alpha" in out and not out["alpha"] > 0:
        raise CatalogError(f"{name}: stepsize alpha must be positive, got {out['alpha']}")
    if "beta" in out and name != "svl" and not 0 <= out["beta"] < 1:
        raise CatalogError(f"{name}: beta must lie in [0, 1), got {out['beta']}")
    if "gamma" in out and not out["gamma"] >= 0:
        raise CatalogError(f"{name}: gamma must be nonnegative, got {out['gamma']}")
    return out


_PROV_DEFAULT = "default parameters are toolkit choices"


def _entry_gradient(p):
    return CatalogEntry("gradient", OPT, p, gradient_descent(p["alpha"]),
                        "gradient descent x+ = x - alpha*grad f(x); " + _PROV_DEFAULT)


def _entry_proximal(p):
    return CatalogEntry("proximal", OPT, p, proximal_point(p["alpha"]),
                        "proximal point x+ = x - alpha*grad f(x+); " + _PROV_DEFAULT)


def _accel_entry(name, p, gamma, note):
    g = accelerated(p["alpha"], p["beta"], gamma)
    params = dict(p, gamma=gamma)
    return CatalogEntry(name, OPT, params, g,
                        f"accelerated family -alpha((1+gamma)z-gamma)/((z-1)(z-beta)), {note}; "
                        + _PROV_DEFAULT)


def _entry_heavy_ball(p):
    return _accel_entry("heavy_ball_opt", p, exact(0), "gamma = 0 (heavy ball)")


def _entry_nesterov(p):
    return _accel_entry("nesterov_opt", p, p["beta"], "gamma = beta (Nesterov)")


def _entry_accelerated(p):
    q = dict(p)
    gamma = q.pop("gamma")
    return _accel_entry("accelerated_opt", q, gamma, "free gamma")


def _est(name, G, order, prov, factors=None, params=None):
    return CatalogEntry(name, EST, params or {}, G.with_label(name), prov, order, factors)


def _entry_eq2(p):
    return _est("eq2_estimator", eq2_estimator(), 1, "first-order estimator x+ = x + L(w - x), y = w - x")


def _entry_eq2z(p):
    return _est("eq2z_estimator", eq2z_estimator(), 1,
                "first-order estimator, adapt-then-combine variant")


def _entry_diging_estimator(p):
    from .synthesis import decompose
    dec = decompose(diging_matrix(p["alpha"]).with_label("diging"), check=False)
    return _est("diging_estimator", dec.g_con, 2,
                "second-order estimator obtained by decomposing DIGing (untransformed)",
                params=p)


def _cascade_estimator(name, con1, con2, prov, params=None):
    G = cascade(con1, con2, label=name)
    return _est(name, G, 2, prov, (con1, con2), params)


_FACTORED = {
    "diging": (eq2_estimator, eq2_estimator, "both factors eq2"),
    "ab": (eq2z_estimator, eq2_estimator, "one factor of each first-order form, single Laplacian"),
    "augdgm": (eq2z_estimator, eq2z_estimator, "both factors adapt-then-combine"),
}


def _factored_estimator_entry(key):
    def make(p):
        f1, f2, note = _FACTORED[key]
        return _cascade_estimator(f"{key}_factored_estimator" if key == "diging" else f"{key}_estimator",
                                  f1(), f2(), f"cascade of first-order estimators: {note}")
    return make


def _accel_factors(p, gamma):
    g = accelerated(p["alpha"], p["beta"], gamma)
    return g, accelerated_factor(g, p["alpha"]), eq2_estimator()


def _entry_abm_estimator(p):
    g, c1, c2 = _accel_factors(p, exact(0))
    return _cascade_estimator("abm_estimator", c1, c2,
                              "cascade of G_opt/alpha estimator and eq2 (heavy ball, gamma = 0)",
                              dict(p, gamma=exact(0)))


def _entry_abn_estimator(p):
    g, c1, c2 = _accel_factors(p, p["beta"])
    return _cascade_estimator("abn_estimator", c1, c2,
                              "cascade of G_opt/alpha estimator and eq2 (Nesterov, gamma = beta)",
                              dict(p, gamma=p["beta"]))


def _table_entry(key):
    def make(p):
        G = table_estimator(key, p.get("beta"))
        return _est(f"{key}_estimator", G, 2, f"{key.replace('_', ' ')} second-order estimator table",
                    params=p)
    return make


def _alg(name, H, prov, params, factors):
    return CatalogEntry(name, ALG, params, H.with_label(name, "H"), prov, None, factors)


def _entry_diging(p):
    H = diging_matrix(p["alpha"])
    return _alg("diging", H,
                "DIGing x+ = Wx - alpha*y, y+ = Wy + grad f(x+) - grad f(x), W = I - L; "
                "transfer matrix derived from these iterations",
                p, (gradient_descent(p["alpha"]), eq2_estimator(), eq2_estimator()))


def _composed_factored(key):
    def make(p):
        g = gradient_descent(p["alpha"])
        f1, f2, note = _FACTORED[key]
        c1, c2 = f1(), f2()
        H = compose(g, cascade(c1, c2))
        return _alg(key, H, f"gradient descent with cascade estimator ({note}); " + _PROV_DEFAULT,
                    p, (g, c1, c2))
    return make


def _composed_accel(name, gamma_of):
    def make(p):
        gamma = gamma_of(p)
        g, c1, c2 = _accel_factors(p, gamma)
        H = compose(g, cascade(c1, c2))
        return _alg(name, H, "accelerated method with cascade of G_opt/alpha estimator and eq2; "
                    + _PROV_DEFAULT, dict(p, gamma=gamma), (g, c1, c2))
    return make


def _composed_table(key):
    def make(p):
        g = gradient_descent(p["alpha"])
        G = table_estimator(key, p.get("beta"))
        H = compose(g, G)
        return _alg(key, H, f"gradient descent with the {key.replace('_', ' ')} estimator; " + _PROV_DEFAULT,
                    p, (g, G))
    return make


_SVL_DEFAULTS = {"alpha": DEFAULTS["alpha"], "beta": SVL_BETA}
_ACC_DEFAULTS = dict(DEFAULTS, gamma=ACCEL_GAMMA)

# name -> (builder, allowed params, defaults)
_REGISTRY = {
    "gradient": (_entry_gradient, ("alpha",), DEFAULTS),
    "proximal": (_entry_proximal, ("alpha",), DEFAULTS),
    "heavy_ball_opt": (_entry_heavy_ball, ("alpha", "beta"), DEFAULTS),
    "nesterov_opt": (_entry_nesterov, ("alpha", "beta"), DEFAULTS),
    "accelerated_opt": (_entry_accelerated, ("alpha", "beta", "gamma"), _ACC_DEFAULTS),
    "eq2_estimator": (_entry_eq2, (), {}),
    "eq2z_estimator": (_entry_eq2z, (), {}),
    "diging_estimator": (_entry_diging_estimator, ("alpha",), DEFAULTS),
    "diging_factored_estimator": (_factored_estimator_entry("diging"), (), {}),
    "ab_estimator": (_factored_estimator_entry("ab"), (), {}),
    "augdgm_estimator": (_factored_estimator_entry("augdgm"), (), {}),
    "abm_estimator": (_entry_abm_estimator, ("alpha", "beta"), DEFAULTS),
    "abn_estimator": (_entry_abn_estimator, ("alpha", "beta"), DEFAULTS),
    "exact_diffusion_estimator": (_table_entry("exact_diffusion"), (), {}),
    "nids_estimator": (_table_entry("nids"), (), {}),
    "extra_estimator": (_table_entry("extra"), (), {}),
    "svl_estimator": (_table_entry("svl"), ("beta",), _SVL_DEFAULTS),
    "diging": (_entry_diging, ("alpha",), DEFAULTS),
    "ab": (_composed_factored("ab"), ("alpha",), DEFAULTS),
    "augdgm": (_composed_factored("augdgm"), ("alpha",), DEFAULTS),
    "exact_diffusion": (_composed_table("exact_diffusion"), ("alpha",), DEFAULTS),
    "nids": (_composed_table("nids"), ("alpha",), DEFAULTS),
    "extra": (_composed_table("extra"), ("alpha",), DEFAULTS),
    "svl": (_composed_table("svl"), ("alpha", "beta"), _SVL_DEFAULTS),
    "abm": (_composed_accel("abm", lambda p: exact(0)), ("alpha", "beta"), DEFAULTS),
    "abn": (_composed_accel("abn", lambda p: p["beta"]), ("alpha", "beta"), DEFAULTS),
}

ALGORITHMS = ("diging", "ab", "augdgm", "exact_diffusion", "nids", "extra", "svl", "abm", "abn")
ORDER2_ESTIMATORS = ("diging_estimator", "diging_factored_estimator", "ab_estimator", "augdgm_estimator",
                     "abm_estimator", "abn_estimator", "exact_diffusion_estimator", "nids_estimator",
                     "extra_estimator", "svl_estimator")
OPT_METHODS = ("gradient", "proximal", "heavy_ball_opt", "nesterov_opt", "accelerated_opt")


def catalog_names(kind: str | None = None) -> list:
    names = list(_REGISTRY)
    if kind is None:
        return names
    return [n for n in names if catalog_get(n).kind == kind]


def catalog_get(name: str, params: dict | None = None, **kw) -> CatalogEntry:
    """Build catalog entry ``name``; parameters may be given as a dict or keywords."""
    key = name.strip().lower().replace("-", "_")
    if key not in _REGISTRY:
        raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(_REGISTRY)}")
    builder, allowed, defaults = _REGISTRY[key]
    given = dict(params or {}, **kw)
    # the SVL beta is free and must not inherit the [0, 1) range check
    p = _params("svl" if key in ("svl", "svl_estimator") else key, allowed, given, defaults)
    return builder(p)


def catalog_selftest(**cert_kw) -> list:
    """Certify every entry at its default parameters."""
    return [catalog_get(n).certify(**cert_kw) for n in _REGISTRY]


__all__ = [
    "CatalogEntry", "catalog_get", "catalog_names", "catalog_selftest", "ALGORITHMS", "ORDER2_ESTIMATORS",
    "OPT_METHODS", "gradient_descent", "proximal_point", "accelerated", "eq2_estimator", "eq2z_estimator",
    "diging_matrix", "table_estimator", "accelerated_factor",
]
