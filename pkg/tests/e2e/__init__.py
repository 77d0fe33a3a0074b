"""E2E tests for API and workflow with real connections."""
