"""Exact computer algebra for Lie 2-algebras, their derivations and non-abelian extensions."""
