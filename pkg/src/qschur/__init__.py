"""q-Schur algebras, the idempotented quantum group U-dot of sl_n, and their canonical bases."""

__version__ = "0.1.0"
