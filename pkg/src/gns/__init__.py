"""GNS representation of the positive orbit trace and its identity checks."""
