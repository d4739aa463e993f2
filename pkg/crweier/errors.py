# crweier/errors.py
"""Exception hierarchy. Every error raised by the package derives from CrweierError."""
from __future__ import annotations

from typing import Iterable, Optional


class CrweierError(Exception):
    """Root of all toolkit errors."""


# ── jets ─────────────────────────────────────────────────────────────

class JetError(CrweierError, ArithmeticError):
    pass


class DivisionNearZero(JetError):
    def __init__(self, value: complex, epsilon: float):
        super().__init__(f"division by jet with value {value!r} (|value| <= {epsilon:g})")
        self.value = value
        self.epsilon = epsilon


class OrderMismatch(JetError):
    def __init__(self, left: int, right: int):
        super().__init__(f"jet orders differ: {left} vs {right}")
        self.left = left
        self.right = right


class OrderExhausted(JetError):
    def __init__(self, what: str = "derivative"):
        super().__init__(f"{what} of an order-0 jet")


class BranchViolation(JetError):
    def __init__(self, fn: str, value: complex):
        super().__init__(f"{fn} evaluated on its branch cut or singularity at {value!r}")
        self.fn = fn
        self.value = value


class BasePointMismatch(JetError):
    def __init__(self, left, right):
        super().__init__(f"jets expanded at different points: {tuple(left)} vs {tuple(right)}")


# ── expressions ──────────────────────────────────────────────────────

class ParseError(CrweierError, ValueError):
    offset: int = 0


class ExprSyntaxError(ParseError):
    def __init__(self, offset: int, expected: Iterable[str], found: str):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        wanted = ", ".join(sorted(self.expected))
        super().__init__(f"syntax error at byte {offset}: found {found!r}, expected one of: {wanted}")


class UnknownIdentifier(ParseError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at byte {offset}")


# ── frames ───────────────────────────────────────────────────────────

class FrameError(CrweierError):
    pass


class NotPseudoconvex(FrameError):
    def __init__(self, levi: complex, point):
        super().__init__(f"Levi form not positive at {tuple(point)}: {levi!r}")
        self.levi = levi


class DegenerateFrame(FrameError):
    def __init__(self, what: str, condition: float):
        super().__init__(f"degenerate {what}: condition number {condition:.3g}")
        self.condition = condition


class ContactViolation(FrameError):
    def __init__(self, residual: float, point):
        super().__init__(f"theta(Z_raw) = {residual:.3g} at {tuple(point)}")
        self.residual = residual


class NonRealGauge(FrameError):
    def __init__(self, residual: float):
        super().__init__(f"gauge function is not real: |Im v| = {residual:.3g}")
        self.residual = residual


# ── Garfield-Lee complex ─────────────────────────────────────────────

class ComplexError(CrweierError):
    pass


class InvalidBidegree(ComplexError, ValueError):
    def __init__(self, bidegree):
        super().__init__(f"no Garfield-Lee space of bidegree {bidegree}")


class UndefinedOnBidegree(ComplexError):
    def __init__(self, operator: str, bidegree):
        super().__init__(f"{operator} is not defined on bidegree {bidegree}")
        self.operator = operator
        self.bidegree = bidegree


# ── immersions ───────────────────────────────────────────────────────

class ImmersionError(CrweierError):
    pass


class PrerequisiteFailed(ImmersionError):
    def __init__(self, check: str, requires: str):
        super().__init__(f"{check} requires {requires} to pass")
        self.check = check
        self.requires = requires


class WrongDimension(ImmersionError):
    def __init__(self, check: str, n: int, expected: int = 4):
        super().__init__(f"{check} needs target dimension {expected}, got {n}")


class NonSymmetric(ImmersionError):
    def __init__(self, defect: float):
        super().__init__(f"second fundamental form not symmetric: |h - h^T| = {defect:.3g}")
        self.defect = defect


class NonRealImmersion(ImmersionError):
    def __init__(self, residual: float):
        super().__init__(f"immersion components are not real: |Im f| = {residual:.3g}")


# ── models / config ──────────────────────────────────────────────────

class ModelError(CrweierError):
    pass


class UnknownModel(ModelError, KeyError):
    def __init__(self, name: str, known: Iterable[str]):
        super().__init__(f"unknown model {name!r}; known: {', '.join(known)}")
        self.name = name


class DomainOutOfChart(ModelError, ValueError):
    pass


class ConfigError(CrweierError, ValueError):
    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ChartParseError(CrweierError, ValueError):
    def __init__(self, message: str, path: Optional[str] = None,
                 key: Optional[str] = None, offset: Optional[int] = None):
        self.path = path
        self.key = key
        self.offset = offset
        where = ":".join(str(p) for p in (path, key) if p)
        if offset is not None:
            where = f"{where} @ byte {offset}" if where else f"byte {offset}"
        super().__init__(f"{where}: {message}" if where else message)
