"""Command-line surface and the built-in gallery."""
