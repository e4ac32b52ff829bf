"""CLI commands for satcn."""
