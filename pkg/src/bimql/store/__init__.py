"""Relational persistence and SELECT-only query execution."""
