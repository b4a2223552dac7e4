"""
Errores del simulador
"""


class ActuationError(Exception):
    """Base de todos los errores propios del simulador"""


class DomainError(ActuationError, ValueError):
    """Valor de c no finito o fuera del dominio de búsqueda"""


class ConfigurationError(ActuationError, ValueError):
    """
    Configuración inválida

    Args:
        key: Ruta de la clave con puntos (ej: 'prior.a', 'lambda')
        message: Descripción del problema
    """

    def __init__(self, key: str, message: str):
        self.key = key
        self.message = message
        super().__init__(f"{key}: {message}")

    def __reduce__(self):
        return type(self), (self.key, self.message)
