"""Weighted volume functionals, soliton vector fields and surface cone checks.

Thin wrapper over the native module: every call goes through the same JSON
reports as the ``soliton-volume`` command line tool.

    >>> import soliton_volume as sv
    >>> r = sv.run("volume eval", sv.builtin("OkPn:2:1"), zeta=["1", "2"])
    >>> r["results"]["value"]["value"]
"""

import json

from . import _soliton_volume as _native

__all__ = [
    "SolitonError",
    "ValidationError",
    "NonConvergenceError",
    "InfeasibleError",
    "SCHEMA_VERSION",
    "builtin",
    "commands",
    "default_precision",
    "reproduce",
    "run",
    "validate_report",
]

SCHEMA_VERSION = _native.schema_version


class SolitonError(Exception):
    """Base class; ``kind`` and ``exit_code`` match the command line tool."""

    kind = "validation"
    exit_code = 2

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class ValidationError(SolitonError):
    kind = "validation"
    exit_code = 2


class NonConvergenceError(SolitonError):
    kind = "non_convergence"
    exit_code = 3

    @property
    def best_iterate(self):
        return self.details.get("best_iterate")


class InfeasibleError(SolitonError):
    kind = "infeasible"
    exit_code = 4


_ERRORS = {cls.kind: cls for cls in (ValidationError, NonConvergenceError, InfeasibleError)}


def _unwrap(result):
    if isinstance(result, tuple):
        kind, message, extra = result
        raise _ERRORS.get(kind, SolitonError)(message, json.loads(extra))
    return json.loads(result)


def commands():
    """Command names accepted by :func:`run`."""
    return list(_native.command_names())


def default_precision():
    """``f64`` or ``extended``, from SOLITON_VOLUME_PRECISION."""
    return _native.default_precision()


def builtin(shortcut):
    """Problem document for a builtin model, e.g. ``"Cn:3"`` or ``"OkPn:3:1"``."""
    return _unwrap(_native.builtin_document_json(shortcut))


def run(command, document=None, **options):
    """Runs ``command`` and returns its report as a dict.

    Options use the report spelling: ``zeta`` and ``tol`` take decimal
    strings, ``direction`` rational strings such as ``"1/2"``. Precision
    defaults to SOLITON_VOLUME_PRECISION as in the command line tool.
    """
    options.setdefault("precision", default_precision())
    options.setdefault("oracle", False)
    inputs = {"options": options}
    if document is not None:
        inputs["document"] = document
    return _unwrap(_native.run_json(command, json.dumps(inputs)))


def reproduce(report):
    """Reruns a report from its echoed inputs."""
    return _unwrap(_native.run_json(report["command"], json.dumps(report["inputs"])))


def validate_report(report):
    """Raises ValidationError if ``report`` does not follow the schema."""
    problem = _native.validate_report_json(json.dumps(report))
    if problem:
        raise ValidationError(problem)
