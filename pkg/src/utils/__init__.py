# Utility functions module 