"""Services package: argumentation, extraction, environments and evaluation."""
