"""Simulator and boundary controllers for dual flexible arms grasping a rigid object."""

__version__ = "0.1.0"
