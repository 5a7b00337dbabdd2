"""bimql: IFC models as SQL + topology graph, queried through an agent loop."""

__version__ = "0.1.0"
