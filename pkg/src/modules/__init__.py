# Module and coefficient ring package
