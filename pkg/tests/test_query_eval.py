"""Binding and evaluation against the desk cube."""

from decimal import Decimal

import pytest

from starcube.cube import EMPTY, build_cube
from starcube.errors import (AmbiguousPath, HierarchyReusedAcrossAxes,
                             NonUniformSet, RoleConflict, StaleCube,
                             UnknownCube, UnknownHierarchy, UnknownMember,
                             UnknownRole)
from starcube.query import bind, evaluate, format_cellset, parse, run_query
from starcube.query.binder import MeasureComponent, MemberComponent


def q(cube, text):
    return run_query(text, cube)


def cell_values(cs):
    return [next(iter(cell.values())) for cell in cs.cells]


# --- binding ------------------------------------------------------------------

def test_member_path_resolves_to_female(desk_cube):
    cube = desk_cube["cube"]
    bound = bind(parse("SELECT [DimPatient].[Gender].[Female] ON COLUMNS "
                       "FROM [Cancer]"), cube)
    comp = bound.axes[0].positions[0][0]
    assert isinstance(comp, MemberComponent)
    assert cube.member(comp.member_id).caption == "Female"


def test_unknown_hierarchy_error(desk_cube):
    with pytest.raises(UnknownHierarchy):
        bind(parse("SELECT [DimPatient].[Nope].Members ON COLUMNS "
                   "FROM [Cancer]"), desk_cube["cube"])


def test_unknown_role_error(desk_cube):
    with pytest.raises(UnknownRole):
        bind(parse("SELECT [DimNothing].[X].Members ON COLUMNS "
                   "FROM [Cancer]"), desk_cube["cube"])


def test_unknown_member_error_no_silent_default(desk_cube):
    with pytest.raises(UnknownMember):
        bind(parse("SELECT [DimPatient].[Gender].[Femal] ON COLUMNS "
                   "FROM [Cancer]"), desk_cube["cube"])


def test_multi_role_dimension_name_is_ambiguous(desk_cube):
    with pytest.raises(AmbiguousPath):
        bind(parse("SELECT [DimDate].[Calendar].[Year].Members ON COLUMNS "
                   "FROM [Cancer]"), desk_cube["cube"])


def test_wrong_cube_name(desk_cube):
    with pytest.raises(UnknownCube):
        bind(parse("SELECT [Measures].[Cost] ON COLUMNS FROM [Other]"),
             desk_cube["cube"])


def test_crossjoin_is_left_major(desk_cube):
    cube = desk_cube["cube"]
    bound = bind(parse(
        "SELECT CROSSJOIN([DimPatient].[Gender].Members, "
        "[DiagnoseDate].[Calendar].[Year].Members) ON COLUMNS FROM [Cancer]"),
        cube)
    positions = bound.axes[0].positions
    assert len(positions) == 2 * 4
    captions = [tuple(cube.member(c.member_id).caption for c in p)
                for p in positions]
    assert captions[0] == ("Female", "2009")
    assert captions[3] == ("Female", "2012")
    assert captions[4] == ("Male", "2009")


def test_non_uniform_set_rejected(desk_cube):
    with pytest.raises(NonUniformSet):
        bind(parse("SELECT {[DimPatient].[Gender].[Female], "
                   "[Measures].[Cost]} ON COLUMNS FROM [Cancer]"),
             desk_cube["cube"])


def test_hierarchy_reuse_across_axes_rejected(desk_cube):
    with pytest.raises(HierarchyReusedAcrossAxes):
        bind(parse("SELECT [DimPatient].[Gender].Members ON COLUMNS, "
                   "[DimPatient].[Gender].[Female] ON ROWS FROM [Cancer]"),
             desk_cube["cube"])


def test_same_role_two_hierarchies_rejected(desk_cube):
    with pytest.raises(RoleConflict):
        bind(parse("SELECT [DimPatient].[Gender].Members ON COLUMNS, "
                   "[DimPatient].[AgeBand].Members ON ROWS FROM [Cancer]"),
             desk_cube["cube"])


def test_default_measure_is_first_of_cube(desk_cube):
    cube = desk_cube["cube"]
    bound = bind(parse("SELECT [DimPatient].[Gender].Members ON COLUMNS "
                       "FROM [Cancer]"), cube)
    assert bound.measures == ["Cost"]


# --- evaluation ----------------------------------------------------------------

def test_total_cost_1x1(desk_cube):
    cs = q(desk_cube["cube"],
           "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer]")
    assert cs.cells == [{"Cost": Decimal(
        desk_cube["manifest"]["expected"]["total_cost"])}]


def test_drilldown_consistency_at_query_level(desk_cube):
    cube = desk_cube["cube"]
    parent = q(cube, "SELECT [Measures].[Cost] ON COLUMNS, "
                     "[DiagnoseDate].[Calendar].[2010] ON ROWS FROM [Cancer]")
    children = q(cube, "SELECT [Measures].[Cost] ON COLUMNS, "
                       "[DiagnoseDate].[Calendar].[2010].Children ON ROWS "
                       "FROM [Cancer]")
    total = sum((v for v in cell_values(children) if v is not EMPTY),
                Decimal(0))
    assert cell_values(parent)[0] == total


def test_slicer_equals_axis_slice(desk_cube):
    cube = desk_cube["cube"]
    sliced = q(cube, "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer] "
                     "WHERE [DimPatient].[Gender].[Female]")
    on_axis = q(cube, "SELECT [Measures].[Cost] ON COLUMNS, "
                      "[DimPatient].[Gender].[Female] ON ROWS FROM [Cancer]")
    assert cell_values(sliced) == cell_values(on_axis)


def test_pivot_swapping_axes_transposes_cells(desk_cube):
    cube = desk_cube["cube"]
    a = q(cube, "SELECT [DimPatient].[Gender].Members ON COLUMNS, "
                "[DiagnoseDate].[Calendar].[Year].Members ON ROWS "
                "FROM [Cancer]")
    b = q(cube, "SELECT [DiagnoseDate].[Calendar].[Year].Members ON COLUMNS, "
                "[DimPatient].[Gender].Members ON ROWS FROM [Cancer]")
    na, ma = len(a.axes[0]), len(a.axes[1])
    for r in range(ma):
        for c in range(na):
            assert a.cells[r * na + c] == b.cells[c * ma + r]


def test_non_empty_removes_empty_positions(desk_cube):
    cube = desk_cube["cube"]
    full = q(cube, "SELECT [Measures].[Cost] ON COLUMNS, "
                   "[DiagnoseDate].[Calendar].[Day].Members ON ROWS "
                   "FROM [Cancer]")
    pruned = q(cube, "SELECT [Measures].[Cost] ON COLUMNS, "
                     "NON EMPTY [DiagnoseDate].[Calendar].[Day].Members "
                     "ON ROWS FROM [Cancer]")
    assert len(pruned.axes[1]) < len(full.axes[1])
    assert all(v is not EMPTY for v in cell_values(pruned))
    kept = [v for v in cell_values(full) if v is not EMPTY]
    assert kept == cell_values(pruned)


def test_measures_on_rows_and_members_on_columns(desk_cube):
    cube = desk_cube["cube"]
    cs = q(cube, "SELECT [DimPatient].[Gender].Members ON COLUMNS, "
                 "{[Measures].[Cost], [Measures].[Quantity]} ON ROWS "
                 "FROM [Cancer]")
    assert cs.measures == ["Cost", "Quantity"]
    assert set(cs.cells[0]) == {"Cost"}
    assert set(cs.cells[2]) == {"Quantity"}


def test_explicit_all_member_means_no_constraint(desk_cube):
    cube = desk_cube["cube"]
    total = q(cube, "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer]")
    via_all = q(cube, "SELECT [Measures].[Cost] ON COLUMNS, "
                      "[DimPatient].[Gender] ON ROWS FROM [Cancer]")
    assert cell_values(total) == cell_values(via_all)


def test_stale_cube_rejected(desk_cube):
    cube = desk_cube["cube"]
    bound = bind(parse("SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer]"),
                 cube)
    bound.build_stamp += 1
    with pytest.raises(StaleCube):
        evaluate(bound, cube)


def test_slicer_measure_sets_the_cell_measure(desk_cube):
    cube = desk_cube["cube"]
    cs = q(cube, "SELECT [DimPatient].[Gender].Members ON COLUMNS "
                 "FROM [Cancer] WHERE ([Measures].[Quantity])")
    assert all(set(cell) == {"Quantity"} for cell in cs.cells)


def test_binder_totality_on_random_grammar_valid_queries(desk_cube):
    """Every grammar-valid query either binds or raises exactly one of the
    enumerated bind errors; nothing else escapes."""
    from hypothesis import given, settings
    from starcube.errors import (StarcubeError, UnknownLevel)
    from test_query_parse import query_ast

    allowed = (AmbiguousPath, HierarchyReusedAcrossAxes, NonUniformSet,
               RoleConflict, UnknownCube, UnknownHierarchy, UnknownLevel,
               UnknownMember, UnknownRole)
    cube = desk_cube["cube"]

    import dataclasses

    @settings(max_examples=150, deadline=None)
    @given(query_ast())
    def check(ast):
        pinned = dataclasses.replace(ast, cube="Cancer")
        try:
            bound = bind(pinned, cube)
            assert bound.measures
        except allowed:
            pass
        except StarcubeError as exc:   # anything else is a totality bug
            raise AssertionError(f"unexpected error type {type(exc)}: {exc}")

    check()


# --- formats -------------------------------------------------------------------

def test_csv_shape_and_determinism(desk_cube):
    cube = desk_cube["cube"]
    text1 = format_cellset(q(cube,
        "SELECT {[Measures].[Cost], [Measures].[Quantity]} ON COLUMNS, "
        "[DimPatient].[Gender].Members ON ROWS FROM [Cancer]"), "csv")
    text2 = format_cellset(q(cube,
        "SELECT {[Measures].[Cost], [Measures].[Quantity]} ON COLUMNS, "
        "[DimPatient].[Gender].Members ON ROWS FROM [Cancer]"), "csv")
    assert text1 == text2
    lines = text1.splitlines()
    assert len(lines) == 3          # header + Female + Male
    assert lines[0] == ",Cost,Quantity"
    assert lines[1].startswith("Female,")


def test_json_wire_schema(desk_cube):
    import json
    cube = desk_cube["cube"]
    text = format_cellset(q(cube,
        "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer]"), "json")
    doc = json.loads(text)
    assert set(doc) == {"axes", "cells", "measures"}
    assert doc["measures"] == ["Cost"]
    position = doc["axes"][0]["positions"][0][0]
    assert set(position) == {"caption", "unique_name"}
    assert doc["cells"][0]["Cost"] == pytest.approx(
        float(desk_cube["manifest"]["expected"]["total_cost"]))


def test_empty_cell_renders_null_json_blank_csv():
    import datetime as dt
    from starcube import Warehouse, reference_schema
    from starcube.etl import Quarantine, Row, load_dimension, load_fact
    warehouse = Warehouse(catalog=reference_schema())
    quarantine = Quarantine()
    D = dt.date(2013, 1, 15)
    load_dimension([Row({"patient_id": "P-1", "name": "A", "gender": "Female",
                         "age": 30, "age_band": "18-39", "address": "x",
                         "phone": "1", "hio_law": "Law 32 Employees"},
                        "t", 2)],
                   warehouse.catalog.dimension("DimPatient"), warehouse, D,
                   quarantine)
    load_dimension([Row({"procedure_id": "PR-1", "name": "CT Scan",
                         "procedure_type": "rays"}, "t", 2)],
                   warehouse.catalog.dimension("DimProcedure"), warehouse, D,
                   quarantine)
    load_dimension([Row({"treatment_id": "T-1", "name": "Cisplatin Course",
                         "kind": "Chemotherapy", "disease": "Lung Cancer"},
                        "t", 2)],
                   warehouse.catalog.dimension("DimTreatment"), warehouse, D,
                   quarantine)
    cube = build_cube(warehouse.catalog, warehouse, "Cancer")
    cs = run_query("SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer]", cube)
    import csv as csv_mod
    import io
    import json
    assert json.loads(format_cellset(cs, "json"))["cells"][0]["Cost"] is None
    parsed = list(csv_mod.reader(io.StringIO(format_cellset(cs, "csv"))))
    assert parsed == [["Cost"], [""]]   # Empty renders as the empty string
    assert "Empty" not in format_cellset(cs, "table")


def test_table_format_alignment(desk_cube):
    text = format_cellset(q(desk_cube["cube"],
        "SELECT [Measures].[Cost] ON COLUMNS, "
        "[DimPatient].[Gender].Members ON ROWS FROM [Cancer]"), "table")
    lines = text.splitlines()
    assert lines[0].strip().endswith("Cost")
    assert lines[2].startswith("Female")
    assert lines[3].startswith("Male")
