"""Bundled transceiver profiles."""
