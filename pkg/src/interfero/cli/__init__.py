"""Command-line front end: pattern runs, figure reproduction and validation."""
