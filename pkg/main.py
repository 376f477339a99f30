from surface_loss.entrypoint import cli

if __name__ == "__main__":
    """
    Provide an entrypoint wrapper around the surface loss module to allow calls of the form `python main.py ...`
    """
    cli()
