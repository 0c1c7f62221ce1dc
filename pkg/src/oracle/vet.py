"""
Exhaustive verification of the extension theorem on finite fragments.

Each item compares two independently computed sides over every instance
(relation, relation pair, subset or function) and every fragment tuple.
Equality items must agree everywhere; inclusion items (ii, iv, v, vi) must
never violate their inclusion, and the run records a witness where it is
strict.
"""

from __future__ import annotations

import json
import math
from functools import reduce
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd
from joblib import Parallel, delayed
from loguru import logger

from src.config import get_settings
from src.core.errors import SizeLimit
from src.core.seqcore import (
    FiniteSet,
    ProductSpec,
    VirtualValue,
    decode_element,
    embed_const,
    encode_element,
    end_equal,
    ends_in,
    enumerate_cyclic,
    k_embedding,
    subset_extension,
)
from src.logic.funcs import (
    ExtendedFunction,
    LiftableFunction,
    aggregate_ext,
    compose_ext,
    identity,
    project_ext,
    relation_after,
)
from src.logic.relations import (
    ExtendedRelation,
    Relation,
    RelationModel,
    VetReport,
    equality,
    fix_prefix_args,
    quantify,
    rel_combine,
    relation_from_model,
    transfer_quantifier_check,
)
from src.oracle.fragment import FragmentModel, all_relations, all_subsets, random_relations

ITEMS = (
    "base",
    "II.1",
    "II.2",
    "II.3",
    "i",
    "ii",
    "iii",
    "iv",
    "v",
    "vi",
    "vii",
    "viii",
    "ix",
    "x",
    "xi",
    "xii",
    "xiii",
    "a",
    "b",
    "c",
)

INCLUSIONS = {
    "ii": "ext(not P) ⊂ not ext(P)",
    "iv": "ext(P) or ext(Q) ⊂ ext(P or Q)",
    "v": "ext(P implies Q) ⊂ (ext(P) implies ext(Q))",
    "vi": "ext(P iff Q) ⊂ (ext(P) iff ext(Q))",
}

QUANTIFIER_ITEMS = {"viii": "forall", "ix": "exists", "x": "unique"}
CLAUSES = {"a": "forall", "b": "exists", "c": "unique"}


def connective_check(item: str, universe: FiniteSet, P: Optional[Relation] = None, Q: Optional[Relation] = None):
    """Both sides of items i-vi as a function of one argument tuple"""
    if item == "i":
        eq = ExtendedRelation(equality(universe))
        return lambda args: (eq(*args), end_equal(*args))
    eP = ExtendedRelation(P)
    if item == "ii":
        neg = ExtendedRelation(rel_combine("not", P))
        return lambda args: (neg(*args), not eP(*args))
    eQ = ExtendedRelation(Q)
    if item == "iii":
        both = ExtendedRelation(rel_combine("and", P, Q))
        return lambda args: (both(*args), eP(*args) and eQ(*args))
    if item == "iv":
        either = ExtendedRelation(rel_combine("or", P, Q))
        return lambda args: (eP(*args) or eQ(*args), either(*args))
    if item == "v":
        imp = ExtendedRelation(rel_combine("implies", P, Q))
        return lambda args: (imp(*args), (not eP(*args)) or eQ(*args))
    if item == "vi":
        iff = ExtendedRelation(rel_combine("iff", P, Q))
        return lambda args: (iff(*args), eP(*args) == eQ(*args))
    raise ValueError(f"item {item!r} is not a connective item")


class _Tally:
    def __init__(self, item: str):
        self.item = item
        self.inclusion = item in INCLUSIONS
        self.instances = 0
        self.violations = 0
        self.violation: Optional[Tuple[tuple, Sequence[Relation]]] = None
        self.strict: Optional[Tuple[tuple, Sequence[Relation]]] = None

    def record(self, lhs, rhs, args: tuple = (), relations: Sequence[Relation] = ()):
        if self.inclusion:
            bad, strict = bool(lhs and not rhs), bool(rhs and not lhs)
        else:
            bad, strict = lhs != rhs, False
        if bad:
            self.violations += 1
            if self.violation is None:
                self.violation = (args, relations)
        elif strict and self.strict is None:
            self.strict = (args, relations)

    def report(self, run: "_Run") -> VetReport:
        if self.violations:
            verdict, found = "Fails", self.violation
        elif self.strict is not None:
            verdict, found = "StrictSubset", self.strict
        else:
            verdict, found = "Equal", None
        report = VetReport(
            item=self.item,
            verdict=verdict,
            direction=INCLUSIONS.get(self.item),
            model=run.model.describe(),
            instances=self.instances,
            violations=self.violations,
            seed=run.seed,
            universe=[encode_element(e) for e in run.universe.sorted()],
        )
        if found is not None:
            args, relations = found
            report.witness = [str(a) for a in args]
            report.witness_json = [a.to_json() for a in args if isinstance(a, VirtualValue)]
            report.relations = [r.name for r in relations]
            report.relation_models = [r.to_model().model_dump(exclude_none=True) for r in relations]
        if verdict == "Fails":
            logger.error(f"Item {self.item} violated on {self.violations} case(s); witness {report.witness}")
        return report


class _Run:
    def __init__(self, model: FragmentModel, arity_cap: int, sample: Optional[int], seed: int):
        self.model = model
        self.universe = model.universe
        self.arity_cap = arity_cap
        self.seed = seed
        self.relations: Dict[int, List[Relation]] = {}
        self.pairs: Dict[int, List[Tuple[Relation, Relation]]] = {}
        for a in range(1, arity_cap + 1):
            if sample is None:
                rels = all_relations(self.universe, a)
                pairs = list(product(rels, repeat=2))
            else:
                rels = random_relations(self.universe, a, sample, seed + a)
                pairs = list(zip(rels, rels[1:] + rels[:1]))
            self.relations[a] = rels
            self.pairs[a] = pairs
        cost = sum(len(self.pairs[a]) * len(model) ** a for a in self.pairs)
        limit = get_settings().size_limit * 10
        if cost > limit:
            raise SizeLimit(f"{cost} relation-pair evaluations exceed the limit {limit}; sample relations instead")
        points = self.universe.sorted()
        self.functions = [
            LiftableFunction(
                "f[" + ",".join(str(t) for t in table) + "]",
                1,
                self.universe,
                self.universe,
                rule=lambda args, lookup=dict(zip(points, table)): lookup[args[0]],
            )
            for table in product(points, repeat=len(points))
        ]


def _fragment_quantifier(q: str, D: FiniteSet, P: Relation, xs: tuple) -> bool:
    """(q D̄, P̄)(xs) by search over cyclic η whose period divides that of xs"""
    m = reduce(math.lcm, (x.period for x in xs), 1)
    etas = [v for v in enumerate_cyclic(D.sorted(), m) if m % v.period == 0]
    ext = ExtendedRelation(P)
    hits = sum(ext(eta, *xs) for eta in etas)
    if q == "forall":
        return hits == len(etas)
    if q == "exists":
        return hits > 0
    return hits == 1


def _run_item(item: str, run: _Run) -> VetReport:
    tally = _Tally(item)
    model, U = run.model, run.universe
    E = model.elements

    if item == "base":
        for a, rels in run.relations.items():
            for P in rels:
                tally.instances += 1
                ext = ExtendedRelation(P)
                for args in product(U.sorted(), repeat=a):
                    tally.record(P.holds(args), ext(*(embed_const(x) for x in args)), args, [P])
    elif item == "II.1":
        for B in all_subsets(U):
            tally.instances += 1
            kb = k_embedding(B)
            tally.record(kb, frozenset(x for x in k_embedding(U) if ends_in(x, B)), (B,))
    elif item == "II.2":
        for B in all_subsets(U):
            tally.instances += 1
            ext = subset_extension(B, E)
            n = len(B.elements)
            ok = (
                (ext == frozenset(E)) == (B == U)
                and (len(ext) == 0) == (n == 0)
                and (len(ext) == 1) == (n == 1)
            )
            tally.record(ok, True, (B,))
    elif item == "II.3":
        subsets = all_subsets(U)
        exts = {B: subset_extension(B, E) for B in subsets}
        for B, C in product(subsets, repeat=2):
            tally.instances += 1
            ok = (exts[B] <= exts[C]) == (B.elements <= C.elements) and (exts[B] == exts[C]) == (B == C)
            tally.record(ok, True, (B, C))
    elif item == "i":
        tally.instances += 1
        check = connective_check("i", U)
        for args in model.tuples(2):
            tally.record(*check(args), args)
    elif item == "ii":
        for a, rels in run.relations.items():
            for P in rels:
                tally.instances += 1
                check = connective_check(item, U, P)
                for args in model.tuples(a):
                    tally.record(*check(args), args, [P])
    elif item in ("iii", "iv", "v", "vi"):
        for a, pairs in run.pairs.items():
            for P, Q in pairs:
                tally.instances += 1
                check = connective_check(item, U, P, Q)
                for args in model.tuples(a):
                    tally.record(*check(args), args, [P, Q])
    elif item == "vii":
        for a, rels in run.relations.items():
            if a < 2:
                continue
            for P in rels:
                for x in U.sorted():
                    tally.instances += 1
                    lhs = ExtendedRelation(fix_prefix_args(P, (x,)))
                    rhs = ExtendedRelation(P).bind(embed_const(x))
                    for args in model.tuples(a - 1):
                        tally.record(lhs(*args), rhs(*args), (embed_const(x),) + args, [P])
    elif item in QUANTIFIER_ITEMS:
        q = QUANTIFIER_ITEMS[item]
        for a, rels in run.relations.items():
            if a < 2:
                continue
            for P in rels:
                for D in all_subsets(U):
                    tally.instances += 1
                    lhs = ExtendedRelation(quantify(q, D, P))
                    for args in model.tuples(a - 1):
                        tally.record(lhs(*args), _fragment_quantifier(q, D, P, args), args, [P])
    elif item == "xi":
        for P in run.relations[1]:
            eP = ExtendedRelation(P)
            for f in run.functions:
                tally.instances += 1
                lhs, ef = ExtendedRelation(relation_after(P, f)), ExtendedFunction(f)
                for x in E:
                    tally.record(lhs(x), eP(ef(x)), (x,), [P])
    elif item == "xii":
        ident = ExtendedFunction(identity(U))
        for x in E:
            tally.record(ident(x), x, (x,))
        for f, g in product(run.functions, repeat=2):
            tally.instances += 1
            ef, eg = ExtendedFunction(f), ExtendedFunction(g)
            composite = compose_ext(eg, ef)
            for x in E:
                tally.record(composite(x), eg(ef(x)), (x,))
    elif item == "xiii":
        D2 = ProductSpec((U, U))
        first, second = project_ext(1, D2), project_ext(2, D2)
        for x, y in model.tuples(2):
            tally.record((first(x, y), second(x, y)), (x, y), (x, y))
        for f1, f2 in product(run.functions, repeat=2):
            tally.instances += 1
            e1, e2 = ExtendedFunction(f1), ExtendedFunction(f2)
            agg = aggregate_ext([e1, e2])
            for x in E:
                tally.record(agg(x), (e1(x), e2(x)), (x,))
    elif item in CLAUSES:
        q = CLAUSES[item]
        for a, rels in run.relations.items():
            for D in all_subsets(U):
                if not D.elements:
                    continue
                spec = D if a == 1 else ProductSpec((D,) * a)
                for P in rels:
                    tally.instances += 1
                    report = transfer_quantifier_check(q, spec, P, max_period=model.max_period)
                    tally.record(report.verdict == "Equal", True, tuple(report.witness), [P])
    else:
        raise ValueError(f"unknown item {item!r}")
    return tally.report(run)


def vet_exhaustive(
    model: FragmentModel,
    arity_cap: int = 2,
    sample: Optional[int] = None,
    seed: Optional[int] = None,
    items: Optional[Sequence[str]] = None,
) -> List[VetReport]:
    """
    Run every item over the model. sample=None checks all relations of
    each arity up to arity_cap; otherwise `sample` seeded random relations
    per arity, paired cyclically for the two-relation items.
    """
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    items = list(items or ITEMS)
    run = _Run(model, arity_cap, sample, seed)
    logger.info(f"Running {len(items)} items on {model.describe()} (arity <= {arity_cap}, sample={sample or 'all'})")
    reports = Parallel(n_jobs=settings.n_jobs, prefer="threads")(delayed(_run_item)(item, run) for item in items)
    logger.info(f"Finished: {sum(r.violations for r in reports)} violation(s)")
    return list(reports)


def summary_table(reports: Sequence[VetReport]) -> pd.DataFrame:
    rows = [
        {
            "item": r.item,
            "verdict": r.verdict,
            "instances": r.instances,
            "violations": r.violations,
            "direction": r.direction or "",
            "witness": "; ".join(r.witness),
        }
        for r in reports
    ]
    return pd.DataFrame(rows, columns=["item", "verdict", "instances", "violations", "direction", "witness"]).set_index(
        "item"
    )


def write_jsonl(reports: Sequence[VetReport], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for r in reports:
            fh.write(r.model_dump_json() + "\n")
    logger.info(f"Wrote {len(reports)} reports to {path}")


def read_jsonl(path: Path) -> List[VetReport]:
    with Path(path).open() as fh:
        return [VetReport.model_validate(json.loads(line)) for line in fh if line.strip()]


def replay_witness(report: VetReport) -> bool:
    """Recompute both sides at a stored witness of items i-vi"""
    if report.item not in ("i", "ii", "iii", "iv", "v", "vi"):
        raise ValueError(f"item {report.item} has no replayable tuple witness")
    if not report.witness_json:
        raise ValueError(f"report for item {report.item} carries no witness")
    universe = FiniteSet(frozenset(decode_element(e) for e in report.universe))
    relations = [relation_from_model(RelationModel.model_validate(m), universe) for m in report.relation_models]
    args = tuple(VirtualValue.from_json(w) for w in report.witness_json)
    lhs, rhs = connective_check(report.item, universe, *relations)(args)
    if report.verdict == "StrictSubset":
        return rhs and not lhs
    if report.item in INCLUSIONS:
        return lhs and not rhs
    return lhs != rhs
