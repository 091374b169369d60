"""Shared fixtures: the seeded desk dataset, loaded once per session."""

import datetime as dt
import json
from pathlib import Path

import pytest

from starcube import Warehouse, reference_schema
from starcube.cube import build_cube
from starcube.etl import generate_synthetic, load_pipeline, run_pipeline

DESK_SEED = 42
DESK_PATIENTS = 500
DESK_FACTS = 5000
DESK_TYPO_RATE = 0.05
DESK_BATCH_DATE = dt.date(2013, 1, 15)


@pytest.fixture(scope="session")
def desk_dataset(tmp_path_factory):
    """Generated sources + manifest for the seeded desk-scale dataset."""
    out = tmp_path_factory.mktemp("desk-src")
    manifest = generate_synthetic(DESK_SEED, DESK_PATIENTS, DESK_FACTS,
                                  DESK_TYPO_RATE, out, with_config=True)
    return {"dir": out, "manifest": manifest}


@pytest.fixture(scope="session")
def desk_warehouse(desk_dataset, tmp_path_factory):
    """Warehouse loaded from the desk dataset through the full pipeline."""
    data_dir = tmp_path_factory.mktemp("desk-wh")
    catalog = reference_schema()
    warehouse = Warehouse.initialize(catalog, data_dir)
    config = load_pipeline(desk_dataset["dir"] / "pipeline.json")
    report = run_pipeline(config, catalog, warehouse, batch_id="desk-b1",
                          batch_date=DESK_BATCH_DATE)
    return {"warehouse": warehouse, "catalog": catalog, "report": report,
            "data_dir": data_dir, **desk_dataset}


@pytest.fixture(scope="session")
def desk_cube(desk_warehouse):
    cube = build_cube(desk_warehouse["catalog"], desk_warehouse["warehouse"],
                      "Cancer")
    return {"cube": cube, **desk_warehouse}


def extended_catalog():
    """Reference schema plus MIN/MAX/AVG/COUNT measures over the same fact
    columns, so every aggregator kind is exercised."""
    from starcube.schema import (Aggregator, CubeDef, FactDef, MeasureDef,
                                 SchemaCatalog)
    from starcube.values import ValueKind

    base = reference_schema()
    fact = base.fact("FactMedical")
    measures = fact.measures + (
        MeasureDef("CostMin", "Cost", Aggregator.MIN, ValueKind.DECIMAL),
        MeasureDef("CostMax", "Cost", Aggregator.MAX, ValueKind.DECIMAL),
        MeasureDef("CostAvg", "Cost", Aggregator.AVG, ValueKind.DECIMAL),
        MeasureDef("QtyMax", "Quantity", Aggregator.MAX, ValueKind.INTEGER),
        MeasureDef("Rows", "Quantity", Aggregator.COUNT, ValueKind.INTEGER),
    )
    extended_fact = FactDef(name=fact.name, roles=fact.roles,
                            measures=measures)
    cube = CubeDef("Cancer", "FactMedical",
                   tuple(r.role for r in fact.roles),
                   tuple(m.name for m in measures))
    return SchemaCatalog(dimensions=base.dimensions, facts=(extended_fact,),
                         cubes=(cube,))


@pytest.fixture(scope="session")
def acceptance_env(desk_dataset, tmp_path_factory):
    """Desk dataset loaded under the extended catalog, plus its oracle."""
    from oracle import BruteForce

    data_dir = tmp_path_factory.mktemp("acceptance-wh")
    catalog = extended_catalog()
    warehouse = Warehouse.initialize(catalog, data_dir)
    config = load_pipeline(desk_dataset["dir"] / "pipeline.json")
    run_pipeline(config, catalog, warehouse, batch_id="acc-b1",
                 batch_date=DESK_BATCH_DATE)
    cube = build_cube(catalog, warehouse, "Cancer")
    oracle = BruteForce(desk_dataset["dir"], desk_dataset["manifest"])
    return {"data_dir": data_dir, "catalog": catalog, "warehouse": warehouse,
            "cube": cube, "oracle": oracle, **desk_dataset}


def load_manifest(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))
