# Utilidades: logging y ajustes de la aplicación
