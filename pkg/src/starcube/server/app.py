"""Read-only HTTP surface: metadata discovery, query execution, exports.

All endpoints live under /api/; built UI assets (when present) are served
at /. Handlers share one immutable published cube per cube name; a new
warehouse version swaps in a freshly built cube atomically, and requests
in flight finish on the cube they started with.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .. import errors as err
from ..cube import CubeManager
from ..query import bind, evaluate, parse
from ..query.formats import cellset_to_csv, cellset_to_json_dict
from ..query.tokens import tokenize
from ..warehouse import Warehouse

DEFAULT_CELL_CAP = 100_000
DEFAULT_PAGE_LIMIT = 500


def status_for(exc: err.StarcubeError) -> int:
    if isinstance(exc, err.UNKNOWN_NAME_ERRORS):
        return 404
    if isinstance(exc, err.StaleCube):
        return 409
    if isinstance(exc, err.OrphanFactRow):
        return 500
    return 400


class EngineState:
    """Warehouse + published cubes behind an atomic-swap reload."""

    def __init__(self, data_dir, cell_cap: int = DEFAULT_CELL_CAP):
        self.data_dir = Path(data_dir)
        self.cell_cap = cell_cap
        self._warehouse: Warehouse | None = None
        self._managers: dict = {}
        self._meta_stamp = None
        self._lock = threading.Lock()

    @property
    def meta_path(self) -> Path:
        return self.data_dir / "warehouse.json"

    def refresh(self) -> None:
        """Reload the warehouse when warehouse.json changed on disk."""
        if not self.meta_path.exists():
            return
        stat = self.meta_path.stat()
        stamp = (stat.st_mtime_ns, stat.st_size)
        if stamp == self._meta_stamp and self._warehouse is not None:
            return
        with self._lock:
            stat = self.meta_path.stat()
            stamp = (stat.st_mtime_ns, stat.st_size)
            if stamp == self._meta_stamp and self._warehouse is not None:
                return
            warehouse = Warehouse.load(self.data_dir)
            managers = {}
            for cube_def in warehouse.catalog.cubes:
                managers[cube_def.name.casefold()] = CubeManager(
                    warehouse.catalog, warehouse, cube_def.name)
            self._warehouse = warehouse
            self._managers = managers
            self._meta_stamp = stamp

    @property
    def loaded(self) -> bool:
        return self._warehouse is not None

    @property
    def warehouse(self) -> Warehouse:
        return self._warehouse

    def manager(self, cube_name: str) -> CubeManager:
        manager = self._managers.get(cube_name.casefold())
        if manager is None:
            raise err.UnknownCube(f"no cube named {cube_name!r}")
        return manager

    def build_all(self) -> None:
        for manager in self._managers.values():
            manager.get()


class QueryRequest(BaseModel):
    cube: str
    mdx: str
    format: str = "json"
    build_stamp: int | None = None


def _member_payload(tree, member, has_children: bool) -> dict:
    return {
        "caption": member.caption,
        "unique_name": tree.unique_name(member.id),
        "key": None if member.key is None else str(member.key),
        "level": tree.level_names[member.level_index],
        "level_index": member.level_index,
        "ordinal": member.ordinal,
        "has_children": has_children,
    }


def _resolve_parent(cube, tree, unique_name: str | None):
    if not unique_name:
        return tree.all_id
    segments = [t.text for t in tokenize(unique_name)
                if t.kind == "bracket_ident"]
    # accept both bare key paths and full [Role].[Hierarchy].[All]... names
    if segments[:2] and segments[0].casefold() == tree.role.casefold():
        segments = segments[1:]
        if segments and segments[0].casefold() \
                == tree.hierarchy.name.casefold():
            segments = segments[1:]
    if segments and segments[0].casefold() == "all":
        segments = segments[1:]
    member_id = tree.all_id
    for segment in segments:
        matches = tree.find_children(member_id, segment)
        if not matches:
            raise err.UnknownMember(f"no member {segment!r} under "
                                    f"{tree.unique_name(member_id)}")
        member_id = matches[0].id
    return member_id


def create_app(state: EngineState, cors_origin: str = "*",
               static_dir=None) -> FastAPI:
    app = FastAPI(title="starcube", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin] if cors_origin != "*" else ["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.exception_handler(err.StarcubeError)
    async def starcube_error_handler(_request: Request,
                                     exc: err.StarcubeError):
        status = status_for(exc)
        body = {"status": status, "code": exc.code, "message": str(exc)}
        if isinstance(exc, err.QuerySyntaxError):
            body["position"] = {"line": exc.line, "column": exc.column}
        return JSONResponse(status_code=status, content=body)

    @app.get("/api/health")
    def health():
        state.refresh()
        if not state.loaded:
            return JSONResponse(status_code=503,
                                content={"status": "loading"})
        stamps = {name: m.current().build_stamp
                  for name, m in state._managers.items()
                  if m.current() is not None}
        if not stamps and state._managers:
            return JSONResponse(status_code=503,
                                content={"status": "building"})
        return {"status": "ok",
                "warehouse_version": state.warehouse.version,
                "cube_build_stamp": max(stamps.values()) if stamps else None}

    @app.get("/api/cubes")
    def list_cubes():
        state.refresh()
        if not state.loaded:
            return []
        catalog = state.warehouse.catalog
        out = []
        for cube_def in catalog.cubes:
            fact = catalog.fact(cube_def.fact)
            out.append({
                "name": cube_def.name,
                "measures": list(cube_def.included_measures),
                "roles": [{"role": r, "dimension": fact.role(r).dimension}
                          for r in cube_def.included_roles],
            })
        return out

    @app.get("/api/cubes/{cube_name}/metadata")
    def cube_metadata(cube_name: str):
        state.refresh()
        if not state.loaded:
            raise err.UnknownCube(f"no cube named {cube_name!r}")
        cube = state.manager(cube_name).get()
        dimensions = []
        for role_name in cube.roles:
            role = cube.fact_def.role(role_name)
            hierarchies = []
            for tree in cube.role_trees(role_name):
                hierarchies.append({
                    "name": tree.hierarchy.name,
                    "levels": [{"name": name,
                                "member_count": len(tree.level_ids[i])}
                               for i, name in enumerate(tree.level_names)],
                })
            dimensions.append({"role": role.role,
                               "dimension": role.dimension,
                               "hierarchies": hierarchies})
        return {
            "name": cube.name,
            "fact": cube.fact_def.name,
            "measures": [{"name": m.name, "aggregator": m.aggregator.value,
                          "kind": m.kind.value} for m in cube.measures],
            "dimensions": dimensions,
            "stats": cube.stats,
        }

    @app.get("/api/cubes/{cube_name}/members")
    def members(cube_name: str, response: Response, role: str,
                hierarchy: str | None = None, parent: str | None = None,
                offset: int = 0, limit: int = DEFAULT_PAGE_LIMIT):
        state.refresh()
        if not state.loaded:
            raise err.UnknownCube(f"no cube named {cube_name!r}")
        cube = state.manager(cube_name).get()
        tree = cube.tree(role, hierarchy)
        parent_id = _resolve_parent(cube, tree, parent)
        children = tree.children(parent_id)
        response.headers["X-Total-Count"] = str(len(children))
        page = children[offset:offset + limit]
        finest = len(tree.level_names) - 1
        return {
            "total": len(children),
            "offset": offset,
            "members": [_member_payload(tree, m, m.level_index < finest)
                        for m in page],
        }

    @app.post("/api/query")
    def query(body: QueryRequest):
        state.refresh()
        if not state.loaded:
            raise err.UnknownCube(f"no cube named {body.cube!r}")
        manager = state.manager(body.cube)
        cube = manager.get()
        if body.build_stamp is not None \
                and body.build_stamp != cube.build_stamp:
            raise err.StaleCube(
                f"client pinned build {body.build_stamp}, current is "
                f"{cube.build_stamp}")
        ast = parse(body.mdx)
        if ast.cube.casefold() != cube.name.casefold():
            raise err.UnknownCube(
                f"query FROM {ast.cube!r} does not match cube {cube.name!r}")
        bound = bind(ast, cube)
        cellset = evaluate(bound, cube)
        if len(cellset.cells) > state.cell_cap:
            raise err.ResultTooLarge(
                f"{len(cellset.cells)} cells exceed the cap of "
                f"{state.cell_cap}")
        if body.format == "csv":
            return PlainTextResponse(cellset_to_csv(cellset),
                                     media_type="text/csv; charset=utf-8")
        if body.format != "json":
            return JSONResponse(status_code=400, content={
                "status": 400, "code": "BadFormat",
                "message": f"format must be json or csv, got {body.format!r}"})
        return cellset_to_json_dict(cellset)

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")

    return app
