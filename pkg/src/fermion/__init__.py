# Fermionic integral module
