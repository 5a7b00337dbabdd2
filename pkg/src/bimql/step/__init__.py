"""ISO 10303-21 parsing, model, and serialization."""
