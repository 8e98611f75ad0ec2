"""Test fixtures package"""