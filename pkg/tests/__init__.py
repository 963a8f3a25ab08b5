# Test package for startrace
