"""Service unit tests package"""