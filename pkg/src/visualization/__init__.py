# Visualization package 