# Capa de línea de comandos: configuración, presets y salidas
