"""FastAPI service wrapping the core toolkit; see app.py for the routes."""
