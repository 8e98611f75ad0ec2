"""Configuration unit tests package"""