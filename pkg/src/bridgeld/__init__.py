"""Connectors that publish NGSI-LD context data as open-data datasets."""

__version__ = "0.1.0"
