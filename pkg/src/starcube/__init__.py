"""starcube: embedded star-schema warehouse and OLAP cube engine."""

from .schema import (SchemaCatalog, define_catalog, load_catalog,
                     reference_schema, validate_catalog)
from .warehouse import Warehouse

__version__ = "0.1.0"

__all__ = ["SchemaCatalog", "define_catalog", "load_catalog",
           "reference_schema", "validate_catalog", "Warehouse",
           "__version__"]
