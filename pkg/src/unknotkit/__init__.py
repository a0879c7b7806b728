"""Exact tools for unknot recognition: diagrams, triangulations, normal
surfaces, curve isotopy, polytope embeddings and projections."""

__version__ = "0.1.0"

from importlib import resources


def fixture(name):
    """Text of a bundled triangulation fixture, e.g. ``fixture("lst.tri")``."""
    return resources.files(__name__).joinpath("fixtures", name).read_text()
