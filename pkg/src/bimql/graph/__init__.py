"""Topology graph construction, queries, and exports."""
