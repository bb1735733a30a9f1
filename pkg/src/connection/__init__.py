# Connections and normal forms package
