"""h-exponential change of a Finsler metric: tensors, connections, hypersurfaces."""

__version__ = "0.1.0"
