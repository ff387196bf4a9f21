"""Named work budgets.

Every enumeration that can blow up checks one of these limits and raises
:class:`~shiftlab.errors.BudgetExceededError` instead of truncating.  All
defaults are multiplied by the environment variable
``SHIFTLAB_BUDGET_SCALE`` (default 1).  :func:`override_limits` replaces
individual values for the duration of a ``with`` block.
"""

import contextlib
import contextvars
import os

from .errors import BudgetExceededError

DEFAULTS = {
    # product of set sizes enumerated by convolution_k
    "convolution_work": 2_000_000,
    # |B| * |A|**l for tensor_set
    "tensor_work": 64**4,
    # largest |A| for which E_k is computed from the full C_k table
    "brute_energy_size": 12,
    # largest |A| or |B| for check_section2
    "identity_suite_size": 12,
    # largest p for dense length-p arrays (convolutions, sumsets, DFT)
    "dense_modulus": 2_000_000,
    # largest p for DFT-based Fourier maxima
    "dft_modulus": 100_000,
    # number of k-tuples enumerated by cor44_min_tuple
    "tuple_enum": 1_000_000,
    # |R|**2 pairs enumerated for E_3 in theorem55_report / lemma54_report
    "e3_pairs": 50_000_000,
    # dense coefficients of the Stepanov auxiliary polynomial
    "psi_coeffs": 10_000_000,
    # entries of the Stepanov linear system (rows * columns)
    "system_entries": 20_000_000,
}

_overrides = contextvars.ContextVar("shiftlab_limit_overrides", default={})


def scale():
    raw = os.environ.get("SHIFTLAB_BUDGET_SCALE", "1")
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"SHIFTLAB_BUDGET_SCALE must be a number, got {raw!r}") from None
    if value <= 0:
        raise ValueError("SHIFTLAB_BUDGET_SCALE must be positive")
    return value


def limit(name):
    """Current value of the budget ``name`` (override, else scaled default)."""
    overrides = _overrides.get()
    if name in overrides:
        return overrides[name]
    return int(DEFAULTS[name] * scale())


def check(name, amount, what=""):
    cap = limit(name)
    if amount > cap:
        label = f" ({what})" if what else ""
        raise BudgetExceededError(f"budget {name!r} exceeded{label}: {amount} > {cap}")


@contextlib.contextmanager
def override_limits(**values):
    unknown = set(values) - set(DEFAULTS)
    if unknown:
        raise KeyError(f"unknown budget(s): {sorted(unknown)}")
    for key, val in values.items():
        if val <= 0:
            raise ValueError(f"budget {key} must be positive")
    merged = {**_overrides.get(), **{k: int(v) for k, v in values.items()}}
    token = _overrides.set(merged)
    try:
        yield
    finally:
        _overrides.reset(token)
