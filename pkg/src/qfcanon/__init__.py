"""Canonical forms of integral quadratic forms over Z/p^k."""
