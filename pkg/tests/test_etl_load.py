"""Dimension SCD loading and fact loading semantics."""

import datetime as dt

import pytest

from starcube import Warehouse, reference_schema
from starcube.errors import UnknownMeasureColumn
from starcube.etl import Quarantine, Row, load_dimension, load_fact

D1 = dt.date(2011, 1, 10)
D2 = dt.date(2011, 6, 1)


def patient(pid="P-17", **overrides):
    base = {"patient_id": pid, "name": "Mona Ali", "gender": "Female",
            "age": 44, "age_band": "40-59", "address": "1 El Nasr Rd, Zagazig",
            "phone": "055-1234567", "hio_law": "Law 32 Employees"}
    base.update(overrides)
    return base


def rows_from(dicts):
    return [Row(dict(d), "test", i + 2) for i, d in enumerate(dicts)]


@pytest.fixture
def warehouse():
    return Warehouse(catalog=reference_schema())


def dim(warehouse):
    return warehouse.catalog.dimension("DimPatient")


def test_exact_duplicates_dedupe_to_one_insert(warehouse):
    q = Quarantine()
    report = load_dimension(rows_from([patient(), patient()]), dim(warehouse),
                            warehouse, D1, q)
    assert report.inserted == 1
    assert report.deduped == 1
    assert len(warehouse.dimension_table("DimPatient")) == 1


def test_conflicting_duplicates_quarantine_the_later_row(warehouse):
    q = Quarantine()
    report = load_dimension(
        rows_from([patient(age=44, age_band="40-59"),
                   patient(age=61, age_band="60+")]),
        dim(warehouse), warehouse, D1, q)
    assert report.inserted == 1
    assert report.quarantined == 1
    assert "ConflictingDuplicates" in q.records[0].reason
    stored = warehouse.dimension_table("DimPatient").current("P-17")
    assert stored.attributes["age"] == 44    # first row won


def test_scd2_change_versions_the_row(warehouse):
    q = Quarantine()
    load_dimension(rows_from([patient()]), dim(warehouse), warehouse, D1, q)
    report = load_dimension(
        rows_from([patient(address="9 Orabi St, Belbeis")]),
        dim(warehouse), warehouse, D2, q)
    assert report.versioned_type2 == 1
    table = warehouse.dimension_table("DimPatient")
    versions = table.versions_of("P-17")
    assert [v.version for v in versions] == [1, 2]
    assert versions[0].is_current is False
    assert versions[0].valid_from == D1
    assert versions[0].valid_to == D2
    assert versions[1].is_current is True
    assert versions[1].valid_to is None
    assert versions[0].surrogate_key != versions[1].surrogate_key
    assert table.check_invariants() == []


def test_scd1_change_overwrites_in_place(warehouse):
    q = Quarantine()
    load_dimension(rows_from([patient()]), dim(warehouse), warehouse, D1, q)
    report = load_dimension(rows_from([patient(phone="055-9999999")]),
                            dim(warehouse), warehouse, D2, q)
    assert report.updated_type1 == 1
    table = warehouse.dimension_table("DimPatient")
    assert len(table) == 1
    row = table.current("P-17")
    assert row.attributes["phone"] == "055-9999999"
    assert row.version == 1


def test_scd1_restates_history_across_versions(warehouse):
    q = Quarantine()
    load_dimension(rows_from([patient()]), dim(warehouse), warehouse, D1, q)
    load_dimension(rows_from([patient(hio_law="Law 99 Students")]),
                   dim(warehouse), warehouse, D2, q)
    load_dimension(rows_from([patient(hio_law="Law 99 Students",
                                      phone="055-0000000")]),
                   dim(warehouse), warehouse, dt.date(2011, 7, 1), q)
    versions = warehouse.dimension_table("DimPatient").versions_of("P-17")
    assert len(versions) == 2
    assert all(v.attributes["phone"] == "055-0000000" for v in versions)


def test_unchanged_rows_are_noops(warehouse):
    q = Quarantine()
    load_dimension(rows_from([patient()]), dim(warehouse), warehouse, D1, q)
    report = load_dimension(rows_from([patient()]), dim(warehouse),
                            warehouse, D2, q)
    assert report.unchanged == 1
    assert len(warehouse.dimension_table("DimPatient")) == 1


def test_missing_natural_key_quarantines(warehouse):
    q = Quarantine()
    bad = patient()
    del bad["patient_id"]
    report = load_dimension(rows_from([bad]), dim(warehouse), warehouse, D1, q)
    assert report.quarantined == 1
    assert "MissingNaturalKey" in q.records[0].reason


def fact_row(pid="P-17", **overrides):
    base = {"PaID": pid, "ProID": "PR-001", "TrID": "T-001",
            "DiagnoseDate": "2011-02-03", "ProcedureDate": "2011-02-10",
            "TreatmentDate": "2011-03-01", "Cost": "125.50", "Quantity": "2"}
    base.update(overrides)
    return base


def seed_dimensions(warehouse):
    q = Quarantine()
    load_dimension(rows_from([patient()]),
                   warehouse.catalog.dimension("DimPatient"), warehouse, D1, q)
    load_dimension(
        rows_from([{"procedure_id": "PR-001", "name": "CT Scan",
                    "procedure_type": "rays"}]),
        warehouse.catalog.dimension("DimProcedure"), warehouse, D1, q)
    load_dimension(
        rows_from([{"treatment_id": "T-001", "name": "Cisplatin Course",
                    "kind": "Chemotherapy", "disease": "Lung Cancer"}]),
        warehouse.catalog.dimension("DimTreatment"), warehouse, D1, q)
    assert len(q) == 0


def test_duplicate_fact_rows_both_load(warehouse):
    seed_dimensions(warehouse)
    q = Quarantine()
    fact = warehouse.catalog.fact("FactMedical")
    report = load_fact(rows_from([fact_row(), fact_row()]), fact, warehouse,
                       "b1", D1, q)
    assert report.inserted == 2
    assert len(warehouse.fact_table("FactMedical")) == 2


def test_date_roles_resolve_to_calendar_members(warehouse):
    seed_dimensions(warehouse)
    q = Quarantine()
    fact = warehouse.catalog.fact("FactMedical")
    load_fact(rows_from([fact_row()]), fact, warehouse, "b1", D1, q)
    dates = warehouse.dimension_table("DimDate")
    # auto-populated range covers diagnose..treatment
    assert dates.current(dt.date(2011, 2, 3)) is not None
    assert dates.current(dt.date(2011, 3, 1)) is not None
    assert dates.current(dt.date(2011, 2, 2)) is None
    table = warehouse.fact_table("FactMedical")
    sk = table.fk_column("DiagnoseDate")[0]
    assert dates.current(dt.date(2011, 2, 3)).surrogate_key == sk


def test_unknown_key_quarantine_policy(warehouse):
    seed_dimensions(warehouse)
    q = Quarantine()
    fact = warehouse.catalog.fact("FactMedical")
    report = load_fact(rows_from([fact_row(pid="P-999")]), fact, warehouse,
                       "b1", D1, q, late_arriving="quarantine")
    assert report.inserted == 0
    assert report.quarantined == 1
    assert "UnknownKey" in q.records[0].reason


def test_unknown_key_unknown_member_policy(warehouse):
    seed_dimensions(warehouse)
    q = Quarantine()
    fact = warehouse.catalog.fact("FactMedical")
    report = load_fact(rows_from([fact_row(pid="P-999")]), fact, warehouse,
                       "b1", D1, q, late_arriving="unknown_member")
    assert report.inserted == 1
    assert warehouse.fact_table("FactMedical").fk_column("PaID")[0] == 0


def test_missing_measure_column_is_fatal(warehouse):
    seed_dimensions(warehouse)
    q = Quarantine()
    fact = warehouse.catalog.fact("FactMedical")
    bad = fact_row()
    del bad["Cost"]
    with pytest.raises(UnknownMeasureColumn):
        load_fact(rows_from([bad]), fact, warehouse, "b1", D1, q)


def test_facts_resolve_against_current_version_at_load_time(warehouse):
    seed_dimensions(warehouse)
    q = Quarantine()
    fact = warehouse.catalog.fact("FactMedical")
    load_fact(rows_from([fact_row()]), fact, warehouse, "b1", D1, q)
    # patient changes insurance law (Type 2) -> new surrogate key
    load_dimension(rows_from([patient(hio_law="Law 99 Students")]),
                   warehouse.catalog.dimension("DimPatient"), warehouse, D2, q)
    load_fact(rows_from([fact_row()]), fact, warehouse, "b2", D2, q)
    versions = warehouse.dimension_table("DimPatient").versions_of("P-17")
    fks = warehouse.fact_table("FactMedical").fk_column("PaID")
    assert fks[0] == versions[0].surrogate_key
    assert fks[1] == versions[1].surrogate_key
