"""Sensitivity oracles for all-pairs minimum cuts in undirected multigraphs."""
