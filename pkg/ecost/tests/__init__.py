"""
ecost Test Suite
================

Tests de invariantes numéricos y de la superficie de la CLI.

Philosophy:
- Invariantes (propiedades que siempre deben valer) antes que cobertura
- Constantes de referencia calculadas a mano o con fixtures chicos
- Los suites pesados (1000 draws, 200 estados) van marcados `slow`

Modules:
- test_qcore: estados, trazas parciales, Schmidt, medidas, JSON
- test_spectra: proyectores, tipos, barridos, lemmas
- test_entanglement: ensembles, EoF, Wootters, regularizado
- test_dilution: canal tijeras, fidelidad, achievability, converse
- test_config: ExperimentConfig y overrides
- test_cli: registry, runner, writers, exit codes
"""
