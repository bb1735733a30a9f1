# Free field realization package
