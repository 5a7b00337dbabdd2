"""Geometry kernel: boxes, meshes, adjacency, representation meshing."""
