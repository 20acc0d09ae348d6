"""Exact regulated-primitive calculus for finite-order distributions."""
