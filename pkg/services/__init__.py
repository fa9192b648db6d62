"""Services - transducers, deciders, commutators, group backends and the reduction builders."""
