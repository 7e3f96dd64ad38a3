"""HTTP service around the core package: pydantic schemas, handlers, FastAPI app."""
