"""Shared default objects: the level-11 form and one twist cache per form."""

from __future__ import annotations

import threading

from .cuspform import CuspFormCoefficients, eta_product_coeffs
from .lfun import TwistCache
from .policy import DEFAULT_POLICY, PrecisionPolicy

_CACHES: dict[tuple, TwistCache] = {}
_LOCK = threading.Lock()


def default_form() -> CuspFormCoefficients:
    return eta_product_coeffs(4096)


def _form_key(a: CuspFormCoefficients, policy: PrecisionPolicy) -> tuple:
    head = a.coeffs[: min(a.M, 256) + 1].tobytes()
    return (a.level, a.source, head, policy.epsilon_abs)


def twist_cache(a: CuspFormCoefficients | None = None, policy: PrecisionPolicy = DEFAULT_POLICY) -> TwistCache:
    """The process-wide Lambda cache for form ``a`` at this precision."""
    a = default_form() if a is None else a
    key = _form_key(a, policy)
    with _LOCK:
        cache = _CACHES.get(key)
        if cache is None:
            cache = _CACHES[key] = TwistCache(a, policy)
    return cache
