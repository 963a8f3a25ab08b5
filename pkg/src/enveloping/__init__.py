"""Universal enveloping algebra in PBW normal form."""
