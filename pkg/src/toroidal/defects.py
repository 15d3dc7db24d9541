"""Single-constant defect injection for mutation tests of the verifiers.

A sweep that can never fail proves nothing; each verifier has one named
defect that flips a single constant on its implementation path.

    with injected("fock.annihilator"):
        assert not verify_fock_identities(...).ok
"""

from __future__ import annotations

from contextlib import contextmanager

KNOWN = {
    "affine.central": "A(1)/A(3) central term uses (m + 1) instead of m",
    "fock.annihilator": "a(m), m > 0, drops its factor m on a(-m)",
    "action.central": "t^m K_i (i < n) acts by 0 instead of K T^{delta_i}",
    "intertwiner.b_lambda": "B_lambda(t^m K_i) uses (lambda, delta_m) instead of (lambda, delta_i)",
}

active: set = set()
# bumped on every change so instance-level caches can invalidate themselves
epoch = 0
_cache_clearers: list = []


def register_cache(fn) -> None:
    _cache_clearers.append(fn)


def _clear() -> None:
    global epoch
    epoch += 1
    for fn in _cache_clearers:
        fn()


@contextmanager
def injected(name: str):
    if name not in KNOWN:
        raise KeyError(f"unknown defect {name!r}")
    active.add(name)
    _clear()
    try:
        yield
    finally:
        active.discard(name)
        _clear()
