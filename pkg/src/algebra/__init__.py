# Lie algebra data package
