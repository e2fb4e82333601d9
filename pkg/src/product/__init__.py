# Product spectral triple module
