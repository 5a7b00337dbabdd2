"""Semantic extraction: units, placements, records, model extraction."""
