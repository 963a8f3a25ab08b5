"""Suite orchestration and report rendering."""
