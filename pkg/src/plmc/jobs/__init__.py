"""Worker pools for multi-chain runs."""
