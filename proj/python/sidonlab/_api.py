import json

try:
    from . import _sidonlab as _core
except ImportError:
    import _sidonlab as _core

__all__ = [
    "run",
    "count_relations",
    "is_independent",
    "expected_relation_count",
    "classic_riesz_product",
    "riesz_interpolate",
    "extract_independent_subset",
    "extract_small_constant_subset",
    "sidon_lower_bound",
    "sidon_upper_bound",
    "two_element_constant_mod_p",
    "product_integral",
    "binomial_gate_check",
]


def _set(elems, free_rank=1, moduli=()):
    spec = {"free_rank": free_rank, "moduli": list(moduli)}
    out = []
    for e in elems:
        if isinstance(e, dict):
            out.append(e)
        elif isinstance(e, (tuple, list)):
            free, torsion = e
            out.append({"free": [str(v) for v in free], "torsion": list(torsion)})
        else:
            out.append(str(e) if abs(e) >= 2**63 else e)
    return json.dumps({"spec": spec, "elems": out})


def _phi(values):
    return json.dumps([[complex(v).real, complex(v).imag] for v in values])


def run(args):
    """Runs a command line; returns (exit_code, stdout, stderr)."""
    return _core.run([str(a) for a in args])


def count_relations(elems, n, free_rank=1, moduli=(), workcap=100_000_000):
    r = json.loads(_core.count_relations(_set(elems, free_rank, moduli), n, workcap))
    r["count"] = int(r["count"])
    r["trivial_count"] = int(r["trivial_count"])
    return r


def is_independent(elems, n, free_rank=1, moduli=(), workcap=100_000_000):
    return _core.is_independent(_set(elems, free_rank, moduli), n, workcap)


def expected_relation_count(elems, n, lam, free_rank=1, moduli=()):
    return _core.expected_relation_count(_set(elems, free_rank, moduli), n, lam)


def classic_riesz_product(elems, phi, free_rank=1, moduli=()):
    return json.loads(_core.classic_riesz_product(_set(elems, free_rank, moduli), _phi(phi)))


def riesz_interpolate(elems, phi, epsilon, peak="fejer", free_rank=1, moduli=()):
    return json.loads(_core.riesz_interpolate(_set(elems, free_rank, moduli), _phi(phi), epsilon, peak))


def extract_independent_subset(elems, n=1, lam=None, attempts=32, seed=0, direct=False, free_rank=1, moduli=()):
    return json.loads(
        _core.extract_independent_subset(_set(elems, free_rank, moduli), n, lam, attempts, seed, direct))


def extract_small_constant_subset(elems, epsilon, seed=0, trials=100, direct=False, free_rank=1, moduli=()):
    return json.loads(
        _core.extract_small_constant_subset(_set(elems, free_rank, moduli), epsilon, seed, trials, direct))


def sidon_lower_bound(elems, trials=200, seed=0, free_rank=1, moduli=()):
    return json.loads(_core.sidon_lower_bound(_set(elems, free_rank, moduli), trials, seed))


def sidon_upper_bound(elems, epsilon=None, trials=100, seed=0, free_rank=1, moduli=()):
    """Peak Riesz family for a given epsilon, the classic family (bound 2) otherwise."""
    return json.loads(_core.sidon_upper_bound(_set(elems, free_rank, moduli), epsilon, trials, seed))


def two_element_constant_mod_p(p, r_steps=200, theta_steps=200):
    return json.loads(_core.two_element_constant_mod_p(p, r_steps, theta_steps))


def product_integral(elems, n, lam, free_rank=1, moduli=()):
    return _core.product_integral(_set(elems, free_rank, moduli), n, lam)


def binomial_gate_check(sizes, thetas):
    return json.loads(_core.binomial_gate_check(list(sizes), list(thetas)))
