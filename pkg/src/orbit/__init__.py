"""Koszul reduction onto the sphere orbits of su(2): the orbit star
product and its positive trace."""
