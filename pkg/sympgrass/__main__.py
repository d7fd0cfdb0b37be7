from sympgrass.main import main

main()
