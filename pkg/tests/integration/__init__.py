"""End-to-end suite runs."""
