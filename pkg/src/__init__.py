# Source code root