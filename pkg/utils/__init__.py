"""Shared plumbing: logging setup and the worker pool."""
