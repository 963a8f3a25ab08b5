"""Universal deformations induced by group actions, and the ax+b instance."""
