"""Test package for Ignatius application"""