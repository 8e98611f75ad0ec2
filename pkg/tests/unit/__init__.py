"""Unit tests package"""