"""cvqkdsim: desk-scale simulator of Gaussian-modulated weak-coherent CV-QKD links."""

__version__ = "0.1.0"
