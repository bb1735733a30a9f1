# Utility functions package 