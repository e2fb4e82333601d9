# Numerical kernels module
