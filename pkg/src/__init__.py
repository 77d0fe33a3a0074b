"""conelab - tangent cones and regularity verdicts at singular points of real hypersurfaces."""

__version__ = "0.1.0"
