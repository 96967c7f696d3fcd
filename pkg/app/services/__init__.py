# Numeric pipeline package
