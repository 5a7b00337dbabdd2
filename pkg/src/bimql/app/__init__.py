"""CLI, HTTP service, scene export, and the evaluation harness."""
