from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="SCHURIAN_",
        case_sensitive=False,
        extra="ignore",
    )

    # App configuration
    app_name: str = "schurian"
    debug: bool = False
    log_level: str = "WARNING"

    # Input handling
    default_field: str = "q"  # "q" or "gf:P"
    strict_compositions: bool = False
    validate_on_load: bool = True

    # Exact algebra
    verify_snf: bool = True
    snf_determinant_limit: int = 40  # largest side checked by an explicit determinant

    # Finite search limits
    max_group_order: int = 100000
    max_smash_objects: int = 100000


# Global settings instance
settings = Settings()
