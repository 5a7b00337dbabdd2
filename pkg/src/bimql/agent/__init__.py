"""Bounded retry-and-refine agent over the store and graph."""
