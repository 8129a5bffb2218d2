"""Read-only HTTP endpoints for FEI profiles and bound reports."""
