"""
Evaluation of parsed statements against a session of bindings.

Exact values stay VirtualReals; a transcendental call moves a value to
the lazy tier, and any operation touching a lazy value stays there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from loguru import logger
from pydantic import BaseModel

from src.config import get_settings
from src.core.errors import EvaluationError, ParseError, VirtualExtensionError
from src.core.vreal import (
    EPS,
    INF,
    EventualTruth,
    Magnitude,
    Sign,
    Undefined,
    VirtualReal,
    classify,
    sign,
    standard_part,
    vr_compare,
    vr_const,
    vr_cyc,
    vr_index,
)
from src.cli.parser import Assign, Ast, BinOp, Call, Compare, Cyc, Deriv, Name, Neg, Num, Pow, parse
from src.lazy.lazy_seq import Estimate, LazySeq, Truth3, as_lazy, check_relation, derivative, lift_value_fn, st_numeric

Value = Union[VirtualReal, LazySeq]
BUILTINS = {"n": vr_index, "inf": lambda: INF, "eps": lambda: EPS}


class EvalResult(BaseModel):
    """One printed result, as text and as JSON"""

    kind: str
    text: str
    name: Optional[str] = None
    value: Optional[Any] = None
    detail: Dict[str, Any] = {}

    def render(self) -> str:
        return f"{self.name} = {self.text}" if self.name else self.text


class Diagnostic(BaseModel):
    kind: str = "error"
    error: str
    message: str
    line: int
    column: int

    def render(self) -> str:
        return f"error at line {self.line}, column {self.column}: {self.error}: {self.message}"


def to_result(obj, name: Optional[str] = None) -> EvalResult:
    if isinstance(obj, VirtualReal):
        return EvalResult(kind="exact", text=str(obj), name=name, value=obj.value.to_json())
    if isinstance(obj, LazySeq):
        return EvalResult(kind="lazy", text=str(obj), name=name, detail={"period": obj.period})
    if isinstance(obj, EventualTruth):
        return EvalResult(
            kind="eventual-truth", text=str(obj), value=obj.kind.value, detail={"per_branch": list(obj.per_branch)}
        )
    if isinstance(obj, Truth3):
        return EvalResult(
            kind="truth3",
            text=str(obj),
            value=obj.kind.value,
            detail={"horizon": obj.horizon, "tol": obj.tol, "witness": obj.witness},
        )
    if isinstance(obj, Estimate):
        value = None if obj.value is None else str(obj.value)
        return EvalResult(
            kind="estimate",
            text=str(obj),
            value=value,
            detail={"status": obj.status, "exact": obj.exact, "horizon": obj.horizon, "tol": obj.tol},
        )
    if isinstance(obj, Fraction):
        return EvalResult(kind="standard-part", text=str(obj), value=str(obj))
    if isinstance(obj, Undefined):
        return EvalResult(kind="undefined", text=str(obj), value=obj.reason)
    if isinstance(obj, (Sign, Magnitude)):
        return EvalResult(kind=type(obj).__name__.lower(), text=obj.value, value=obj.value)
    raise EvaluationError(f"cannot print a {type(obj).__name__}")


def diagnostic(e: Exception) -> Diagnostic:
    message = e.message if isinstance(e, ParseError) else str(e)
    return Diagnostic(
        error=type(e).__name__, message=message, line=getattr(e, "line", 1) or 1, column=getattr(e, "column", 1) or 1
    )


def _locate(e: Exception, node: Ast) -> Exception:
    if getattr(e, "line", None) is None:
        e.line, e.column = node.line, node.column
    return e


@dataclass
class Session:
    bindings: Dict[str, Value] = field(default_factory=dict)

    def run_line(self, text: str, line: int = 1) -> Optional[EvalResult]:
        """Parse and evaluate one line; None for blank or comment lines"""
        ast = parse(text, line)
        if ast is None:
            return None
        return self.eval(ast)

    def eval(self, ast: Ast) -> EvalResult:
        if isinstance(ast, Assign):
            value = self._operand(ast.expr, {})
            self.bindings[ast.name] = value
            logger.debug(f"bound {ast.name} = {value}")
            return to_result(value, name=ast.name)
        return to_result(self._eval(ast))

    def _eval(self, node: Ast, scope: Optional[Dict[str, Value]] = None):
        try:
            return self._dispatch(node, scope or {})
        except VirtualExtensionError as e:
            raise _locate(e, node)
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise _locate(EvaluationError(str(e)), node) from e

    def _operand(self, node: Ast, scope) -> Value:
        out = self._eval(node, scope)
        if not isinstance(out, (VirtualReal, LazySeq)):
            raise _locate(EvaluationError(f"{to_result(out).text!r} is a verdict, not a value"), node)
        return out

    def _dispatch(self, node: Ast, scope):
        if isinstance(node, Num):
            return vr_const(node.value)
        if isinstance(node, Name):
            if node.id in scope:
                return scope[node.id]
            if node.id in BUILTINS:
                return BUILTINS[node.id]()
            if node.id not in self.bindings:
                raise EvaluationError(f"name {node.id!r} is not bound")
            return self.bindings[node.id]
        if isinstance(node, Cyc):
            items = [self._operand(item, scope) for item in node.items]
            if any(isinstance(item, LazySeq) for item in items):
                raise EvaluationError("cyc entries must be exact values")
            return vr_cyc(*items)
        if isinstance(node, Neg):
            return -self._operand(node.arg, scope)
        if isinstance(node, Pow):
            return self._operand(node.base, scope) ** node.k
        if isinstance(node, BinOp):
            left, right = self._operand(node.left, scope), self._operand(node.right, scope)
            if isinstance(left, LazySeq) or isinstance(right, LazySeq):
                left, right = as_lazy(left), as_lazy(right)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            if node.op == "*":
                return left * right
            return left / right
        if isinstance(node, Compare):
            left, right = self._operand(node.left, scope), self._operand(node.right, scope)
            if isinstance(left, VirtualReal) and isinstance(right, VirtualReal):
                return vr_compare(left, node.op, right)
            settings = get_settings()
            return check_relation(left, node.op, right, settings.tol, settings.horizon)
        if isinstance(node, Call):
            return self._call(node, self._operand(node.arg, scope))
        if isinstance(node, Deriv):
            return self._deriv(node, scope)
        raise EvaluationError(f"cannot evaluate {type(node).__name__}")

    def _call(self, node: Call, arg: Value):
        if node.func in ("ln", "sin", "cos", "exp"):
            return lift_value_fn(node.func, arg)
        if node.func == "st~":
            if isinstance(arg, VirtualReal):
                logger.warning(f"st~ of exact value {arg}; using exact st")
                return standard_part(arg)
            settings = get_settings()
            return st_numeric(arg, settings.tol, settings.horizon)
        if isinstance(arg, LazySeq):
            hint = "; use st~ for a numeric estimate" if node.func == "st" else ""
            raise EvaluationError(f"{node.func} needs an exact value, got {arg}{hint}")
        if node.func == "st":
            return standard_part(arg)
        if node.func == "sign":
            return sign(arg)
        return classify(arg)

    def _deriv(self, node: Deriv, scope):
        at = self._operand(node.at, scope)
        if not isinstance(at, VirtualReal) or at.period != 1 or not at.branches()[0].is_constant:
            raise EvaluationError(f"deriv needs a standard rational point, got {at}")
        x0 = at.branches()[0].constant_value()

        def f(x):
            return self._operand(node.body, {**scope, node.var: x})

        settings = get_settings()
        return derivative(f, x0, settings.tol, settings.horizon)
