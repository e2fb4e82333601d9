# NCG - finite spectral triples, fluctuations and fermionic integrals
