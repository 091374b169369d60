"""Query language: tokenizer, parser, binder, evaluator, formatters."""

from .tokens import Token, tokenize
from .parser import (AxisSpec, ChildrenExpr, CrossJoin, ExplicitSet,
                     MemberPath, MembersExpr, QueryAst, TupleExpr, parse,
                     print_query)
from .binder import BoundQuery, MeasureComponent, MemberComponent, bind
from .evaluator import CellSet, evaluate, run_query
from .formats import format_cellset

__all__ = [
    "Token", "tokenize",
    "AxisSpec", "ChildrenExpr", "CrossJoin", "ExplicitSet", "MemberPath",
    "MembersExpr", "QueryAst", "TupleExpr", "parse", "print_query",
    "BoundQuery", "MeasureComponent", "MemberComponent", "bind",
    "CellSet", "evaluate", "run_query", "format_cellset",
]
