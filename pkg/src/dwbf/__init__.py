"""Bit-flipping LDPC decoders with dynamic checksum weights."""

__version__ = "0.1.0"
